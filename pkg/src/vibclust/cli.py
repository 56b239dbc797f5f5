import logging
import os
import sys
import click
import yaml
import jsonschema
import pandas

from .config import config
from .run_config import RunConfig
from .features import FEATURE_KINDS, DOMAINS, extract_features
from .dataio import generate_synthetic
from .grid import expand_grid, run_grid, baseline_ledger
from .report import GridReport, aggregate_report, merge_results
from .exceptions import VibclustError, MissingBaselineError

log_path = os.path.join(os.environ.get("VIBCLUST_DIR", os.getcwd()), config["log"]["filename"])
os.makedirs(os.path.dirname(log_path), exist_ok=True)
logging.basicConfig(filename=log_path, level=logging.DEBUG, format="%(asctime)s:%(levelname)s:%(message)s")

root_logger = logging.getLogger()
str_handler = logging.StreamHandler(sys.stdout)
str_handler.setLevel(logging.INFO)
formatter = logging.Formatter("%(asctime)s:%(levelname)s:%(message)s")
str_handler.setFormatter(formatter)
root_logger.addHandler(str_handler)

INPUT_ERRORS = (VibclustError, ValueError, TypeError, OSError, jsonschema.exceptions.ValidationError, yaml.YAMLError)
"""Configuration and ingestion failures, reported with exit status 2"""

def _setVerbosity(
    verbose : bool,
    quiet : bool,
    verbosity : str = "normal"
    ) -> None:
    if verbose or verbosity == "verbose":
        str_handler.setLevel(logging.DEBUG)
    elif quiet or verbosity == "quiet":
        str_handler.setLevel(logging.ERROR)
    else:
        str_handler.setLevel(logging.INFO)

def _abort(
    ctx : click.Context,
    error : Exception
    ) -> None:
    logging.error(str(error))
    click.echo("Error: %s" % str(error), err=True)
    ctx.exit(2)

def _loadRunConfig(
    config_file : str,
    **overrides
    ) -> RunConfig:
    run_config = RunConfig.load(config_file) if config_file is not None else RunConfig(synthetic_suite=True)
    return run_config.override(**overrides)

def _provenance(
    run_config : RunConfig,
    catalog,
    grid_config
    ) -> dict:
    from . import __version__
    return {
        "version": __version__,
        "run_config": run_config.snapshot(),
        "defaults": {k: v for k, v in config.items() if k != "log"},
        "catalog": catalog.toDict(),
        "grid": grid_config.toDict()
    }

def _echoTables(
    report : GridReport,
    experiments : list
    ) -> None:
    tables = report.headlineTables()
    for experiment in experiments:
        if experiment in tables:
            click.echo("\nAverage purity, %s\n%s" % (experiment, tables[experiment].to_string(float_format=lambda v: "%.4f" % v)))
        if experiment == "q2" and "q2" in report.rankings:
            click.echo("\nPurity per dataset, q1 features\n%s" % report.rankings["q2"].to_string(index=False, float_format=lambda v: "%.4f" % v))

@click.command()
@click.pass_context
@click.option("--config", "-c", "config_file", help="Run configuration file (.yml or .json). Defaults to the synthetic suite", type=str, default=None)
@click.option("--out", "-o", help="Output directory", type=str, default=None)
@click.option("--raw", is_flag=True, help="Write raw feature values instead of standardized ones", default=False, show_default=True)
@click.option("--savgol-window", help="Override Savitzky-Golay window size", type=int, default=None)
@click.option("--savgol-order", help="Override Savitzky-Golay polynomial order", type=int, default=None)
@click.option("--verbose", "-v", is_flag=True, help="log debug messages to stdout", default=False, show_default=True)
@click.option("--quiet", "-q", is_flag=True, help="quiet mode", default=False, show_default=True)
def features(ctx, config_file, out, raw, savgol_window, savgol_order, verbose, quiet):
    """
    Write the feature matrices of every dataset: features_<dataset>_<TD|FD>.csv with the 6 feature kinds per channel, plus per class summaries
    """
    _setVerbosity(verbose, quiet)
    try:
        run_config = _loadRunConfig(config_file, output_dir=out, savgol_window=savgol_window, savgol_order=savgol_order)
        _setVerbosity(verbose, quiet, run_config.verbosity)
        catalog = run_config.buildCatalog()
        os.makedirs(run_config.output_dir, exist_ok=True)
        for dataset_id in catalog.dataset_ids:
            dataset = catalog.preprocessed(dataset_id)
            for domain in DOMAINS:
                matrix = extract_features(dataset, list(FEATURE_KINDS), domain, standardize = run_config.standardize and not raw)
                path = os.path.join(run_config.output_dir, "features_%s_%s.csv" % (dataset_id, domain))
                matrix.saveCsv(path)
                summary = matrix.classSummary()
                summary.to_csv(os.path.join(run_config.output_dir, "summary_%s_%s.csv" % (dataset_id, domain)))
                logging.info("Features of %s (%s) saved to %s" % (dataset_id, domain, path))
                with pandas.option_context("display.width", 200, "display.max_columns", 12):
                    click.echo("\nPer class mean of %s, %s\n%s" % (dataset_id, domain, summary["mean"].to_string(float_format=lambda v: "%.4f" % v)))
    except INPUT_ERRORS as e:
        _abort(ctx, e)

@click.command()
@click.pass_context
@click.option("--config", "-c", "config_file", help="Run configuration file (.yml or .json). Defaults to the synthetic suite", type=str, default=None)
@click.option("--which", "-w", help="Experiment to run", type=click.Choice(["q1", "q2", "q3", "q4", "q5", "all"]), default=None)
@click.option("--runs", "-r", help="Runs per setting", type=int, default=None)
@click.option("--jobs", "-j", help="Parallel worker processes", type=int, default=None)
@click.option("--out", "-o", help="Output directory", type=str, default=None)
@click.option("--seed-salt", "-s", help="String mixed into every trial seed", type=str, default=None)
@click.option("--savgol-window", help="Override Savitzky-Golay window size", type=int, default=None)
@click.option("--savgol-order", help="Override Savitzky-Golay polynomial order", type=int, default=None)
@click.option("--verbose", "-v", is_flag=True, help="log debug messages to stdout", default=False, show_default=True)
@click.option("--quiet", "-q", is_flag=True, help="quiet mode", default=False, show_default=True)
def experiment(ctx, config_file, which, runs, jobs, out, seed_salt, savgol_window, savgol_order, verbose, quiet):
    """
    Run experiments and write report.json, aggregate_<experiment>.csv, ranking tables and timings.csv

    q3, q4 and q5 need q1 results, from this run or from report.json in the output directory. Exit status is 1 if every trial failed
    """
    _setVerbosity(verbose, quiet)
    try:
        run_config = _loadRunConfig(config_file, experiment=which, runs_per_setting=runs, jobs=jobs, output_dir=out, seed_salt=seed_salt, savgol_window=savgol_window, savgol_order=savgol_order)
        _setVerbosity(verbose, quiet, run_config.verbosity)
        catalog = run_config.buildCatalog()
        grid_config = run_config.gridConfig(catalog.dataset_ids)
        os.makedirs(run_config.output_dir, exist_ok=True)
        previous = []
        report_path = os.path.join(run_config.output_dir, "report.json")
        if os.path.exists(report_path) and run_config.experiment != "all":
            previous = GridReport.load(report_path).results
            logging.info("Loaded %i previous trial results from %s" % (len(previous), report_path))
    except INPUT_ERRORS as e:
        _abort(ctx, e)
    current = []
    for name in run_config.experiments:
        try:
            baseline = baseline_ledger(merge_results(previous, current))
            if name == "q2" and not (baseline["experiment"] == "q1").any():
                raise MissingBaselineError("q2 summarizes q1 results. Run experiment q1 first")
            specs = expand_grid(name, grid_config, baseline)
        except INPUT_ERRORS as e:
            _abort(ctx, e)
        logging.info("Experiment %s: %i trials" % (name, len(specs)))
        current.extend(run_grid(specs, catalog, run_config.jobs, run_config.algorithmParameters(), config["grid"]["elbow_extra_clusters"]))
    report = aggregate_report(merge_results(previous, current), provenance=_provenance(run_config, catalog, grid_config))
    report.save(run_config.output_dir)
    _echoTables(report, run_config.experiments)
    if len(current) and all(not r.ok for r in current):
        logging.error("All %i trials failed" % len(current))
        ctx.exit(1)

@click.command()
@click.pass_context
@click.option("--out", "-o", help="Output directory holding report.json", type=str, default="output", show_default=True)
@click.option("--which", "-w", help="Experiment tables to print", type=click.Choice(["q1", "q2", "q3", "q4", "q5", "all"]), default="all", show_default=True)
@click.option("--verbose", "-v", is_flag=True, help="log debug messages to stdout", default=False, show_default=True)
@click.option("--quiet", "-q", is_flag=True, help="quiet mode", default=False, show_default=True)
def report(ctx, out, which, verbose, quiet):
    """
    Reload report.json, rewrite the aggregate and ranking csv files and print the headline tables
    """
    _setVerbosity(verbose, quiet)
    try:
        grid_report = GridReport.load(out)
    except INPUT_ERRORS as e:
        _abort(ctx, e)
    grid_report.save(out, timings=False)
    _echoTables(grid_report, grid_report.experiments if which == "all" else [which])

@click.command()
@click.pass_context
@click.option("--config", "-c", "config_file", help="Run configuration file (.yml or .json). Defaults to the synthetic suite", type=str, default=None)
@click.option("--out", "-o", help="Output directory", type=str, default=None)
@click.option("--verbose", "-v", is_flag=True, help="log debug messages to stdout", default=False, show_default=True)
@click.option("--quiet", "-q", is_flag=True, help="quiet mode", default=False, show_default=True)
def synth(ctx, config_file, out, verbose, quiet):
    """
    Write every synthetic dataset of the configuration as <name>.csv with a matching manifest <name>.json
    """
    _setVerbosity(verbose, quiet)
    try:
        run_config = _loadRunConfig(config_file, output_dir=out)
        specs = run_config.syntheticSpecs()
        os.makedirs(run_config.output_dir, exist_ok=True)
    except INPUT_ERRORS as e:
        _abort(ctx, e)
    if not len(specs):
        logging.warning("No synthetic datasets configured")
    for spec in specs:
        dataset = generate_synthetic(spec)
        csv_name = "%s.csv" % spec.name
        dataset.saveCsv(os.path.join(run_config.output_dir, csv_name))
        dataset.toManifest(csv_name).save(os.path.join(run_config.output_dir, "%s.json" % spec.name))
        logging.info("Synthetic dataset %s saved to %s" % (spec.name, run_config.output_dir))
