import click

from . import __version__, config
from .commands import basis, orientability, report, steenrod
from .commands.deps import Settings
from .log import configure


@click.group()
@click.version_option(__version__, prog_name="sqorient")
@click.option("--format", "format_", type=click.Choice(["json", "text"]), default=config.REPORT_FORMAT,
              show_default=True, help="Report format.")
@click.option("--threads", type=click.IntRange(min=1), default=config.DEFAULT_THREADS, show_default=True,
              help="Parallelism budget; output does not depend on it.")
@click.option("--log-level", default=config.LOG_LEVEL, show_default=True, help="Level for sqorient.* loggers.")
@click.pass_context
def cli(ctx: click.Context, format_: str, threads: int, log_level: str):
    """Steenrod squares, Wu classes and k-orientability of presented cohomology rings."""
    configure(log_level)
    ctx.obj = Settings(format=format_, threads=threads)


# Basis
cli.add_command(basis.basis_command)
cli.add_command(basis.monomials_command)

# Steenrod squares
cli.add_command(steenrod.sq_command)
cli.add_command(steenrod.table_command)

# Characteristic classes and verdicts
cli.add_command(orientability.wu_command)
cli.add_command(orientability.sw_command)
cli.add_command(orientability.orient_command)
cli.add_command(orientability.euler_command)
cli.add_command(orientability.signature_command)
cli.add_command(orientability.check_command)

# End to end
cli.add_command(report.report_command)
