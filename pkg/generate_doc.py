import os
import subprocess

selected_files = [
    "dataio",
    "preprocess",
    "spectral",
    "features",
    "reduce",
    "clustering.kmeans",
    "clustering.gmm",
    "clustering.optics",
    "clustering.clustering_function",
    "purity",
    "catalog",
    "trial",
    "grid",
    "report",
    "run_config",
    "validation"
]

os.makedirs("doc", exist_ok=True)
index_rows = []
for filename in selected_files:
    path = "vibclust.%s" % filename
    with open("doc/%s.md" % filename,"w") as output:
        subprocess.run(["pydoc-markdown", "-I","src","-m",path,"--render-toc"],stdout = output)
    index_rows.append("- [%s](../blob/main/doc/%s.md)" % (filename ,filename))

index_md = "# Modules\n\n%s" % "\n".join(index_rows)
with open("doc/api_index.md","w") as f:
    f.write(index_md)
