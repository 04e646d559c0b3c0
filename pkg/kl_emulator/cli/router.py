import click

from kl_emulator.cli.commands import doe, fit, predict, report, simulate, validate


# Pipeline stages in execution order
COMMANDS = [
    doe.doe,
    simulate.simulate,
    fit.fit,
    predict.predict,
    validate.validate,
    report.report,
]


def register_commands(group: click.Group):
    for command in COMMANDS:
        group.add_command(command)
