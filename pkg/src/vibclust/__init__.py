import click

__version__ = '0.1.0'

from vibclust.cli import features, experiment, report, synth

@click.group()
@click.version_option(version=__version__)
def cli():
    pass


cli.add_command(features)
cli.add_command(experiment)
cli.add_command(report)
cli.add_command(synth)
