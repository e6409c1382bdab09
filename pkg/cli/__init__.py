import argparse
from pathlib import Path

from cli.utils import (
    CustomHelpFormatter,
    _validate_domain,
    _validate_finite_float,
    _validate_non_negative_float,
    _validate_non_negative_int,
    _validate_point,
    _validate_positive_float,
    _validate_positive_int,
)
from qharm.commands.base import CommandResult
from qharm.commands.distortion import DistortionCommand
from qharm.commands.laplacian import LaplacianCommand
from qharm.commands.sweep import SweepCommand
from qharm.commands.thresholds import ThresholdsCommand
from qharm.commands.verify import VerifyCommand
from qharm.commands.witness import WitnessCommand
from qharm.enums import case_insensitive_enum, enum_choices
from qharm.enums.shared import ExitCode, OutputFormat, ProgressMode
from qharm.exceptions import NoWitnessRequiredError, OracleMismatchError, QHarmError
from qharm.payloads.analysis import (
    DistortionPayload,
    LaplacianPayload,
    ThresholdsPayload,
    VerifyPayload,
    WitnessPayload,
)
from qharm.payloads.sweep import SweepPayload
from qharm.utils._version import __version__, program_name
from qharm.utils.exit import _exit_application


def _formatter(prog):
    return CustomHelpFormatter(prog, width=78, max_help_position=3)


def cli_parser(base_wd: Path, argv=None):
    # Top-level parser
    parser = argparse.ArgumentParser(prog=program_name)

    # Add a global -v flag
    parser.add_argument("-v", "--version", action="version", version=f"%(prog)s {__version__}")

    # Sub-command parser
    subparsers = parser.add_subparsers(dest="sub_command")

    #############################################################
    ### Common args (re-used across one or more sub commands) ###
    #############################################################
    global_group = argparse.ArgumentParser(add_help=False)
    global_group.add_argument(
        "--seed",
        type=_validate_non_negative_int,
        help="Seed for every sampled quantity (default: 42).",
    )
    global_group.add_argument(
        "--samples",
        type=_validate_positive_int,
        help="Quasi-random samples per domain pass (default: 4096).",
    )
    global_group.add_argument(
        "--tol",
        type=_validate_non_negative_float,
        help="Additive violation tolerance on the Laplacian (default: 1e-9).",
    )
    global_group.add_argument(
        "-f",
        "--format",
        type=case_insensitive_enum(OutputFormat),
        choices=list(OutputFormat),
        metavar=enum_choices(OutputFormat),
        help="Output format (default: text, sweep: the config's format).",
    )
    global_group.add_argument(
        "-o",
        "--out",
        type=str,
        help="Output file path. If not specified the result is printed to stdout.",
    )
    global_group.add_argument(
        "-p",
        "--progress-mode",
        type=case_insensitive_enum(ProgressMode),
        default=ProgressMode.STANDARD,
        choices=list(ProgressMode),
        metavar=enum_choices(ProgressMode),
        help="Sets progress output mode verbosity (stderr).",
    )

    # (n, K) pair
    dimension_group = argparse.ArgumentParser(add_help=False)
    dimension_group.add_argument("--n", type=int, required=True, help="Space dimension (n >= 2).")
    dimension_group.add_argument("--K", type=_validate_finite_float, required=True, help="Distortion constant (K >= 1).")

    # map input
    map_group = argparse.ArgumentParser(add_help=False)
    map_group.add_argument(
        "-m",
        "--map",
        type=str,
        required=True,
        help="Map JSON file or builtin: identity[:n], stretch:n,K, compress:n,K, zsquared.",
    )

    #############################################################
    #################### Thresholds Command #####################
    #############################################################
    thresholds_parser = subparsers.add_parser(
        "thresholds", parents=[global_group, dimension_group], formatter_class=_formatter
    )
    thresholds_parser.add_argument(
        "--q", type=_validate_finite_float, help="Also classify this exponent against the thresholds."
    )

    #############################################################
    #################### Laplacian Command ######################
    #############################################################
    laplacian_parser = subparsers.add_parser(
        "laplacian", parents=[global_group, map_group], formatter_class=_formatter
    )
    laplacian_parser.add_argument(
        "--point",
        type=_validate_point,
        required=True,
        help="Comma separated point. Note '--point=' is required for negative first coordinates (--point=-1,0).",
    )
    laplacian_parser.add_argument("--q", type=_validate_finite_float, required=True, help="Exponent q.")
    laplacian_parser.add_argument(
        "--oracle", action="store_true", help="Cross-check against the finite difference oracle (exit 3 on mismatch)."
    )
    laplacian_parser.add_argument(
        "--fd-step", type=_validate_positive_float, help="Base finite difference step (default: 1e-3)."
    )

    #############################################################
    ###################### Verify Command #######################
    #############################################################
    verify_parser = subparsers.add_parser("verify", parents=[global_group, map_group], formatter_class=_formatter)
    verify_parser.add_argument(
        "--domain",
        type=_validate_domain,
        help="box:C1,..,Cn:HALF_WIDTH or ball:C1,..,Cn:RADIUS (default: box around e_n, half width 0.5).",
    )
    verify_parser.add_argument("--q", type=_validate_finite_float, required=True, help="Exponent q.")
    verify_parser.add_argument(
        "--witness-point",
        type=_validate_point,
        action="append",
        help="Extra point added to the samples, may be repeated.",
    )

    #############################################################
    ###################### Witness Command ######################
    #############################################################
    witness_parser = subparsers.add_parser(
        "witness", parents=[global_group, dimension_group], formatter_class=_formatter
    )
    witness_parser.add_argument("--q", type=_validate_finite_float, required=True, help="Exponent inside the gap.")

    #############################################################
    ####################### Sweep Command #######################
    #############################################################
    sweep_parser = subparsers.add_parser("sweep", parents=[global_group], formatter_class=_formatter)
    sweep_parser.add_argument("-c", "--config", type=str, required=True, help="Sweep configuration JSON file.")
    sweep_parser.add_argument(
        "--timing", action="store_true", help="Record wall time per row (output is no longer reproducible)."
    )

    #############################################################
    #################### Distortion Command #####################
    #############################################################
    distortion_parser = subparsers.add_parser(
        "distortion", parents=[global_group, map_group], formatter_class=_formatter
    )
    where = distortion_parser.add_mutually_exclusive_group()
    where.add_argument("--point", type=_validate_point, help="Pointwise spectral data and distortion.")
    where.add_argument("--domain", type=_validate_domain, help="Sampled distortion over a domain.")

    #############################################################
    ######################### Execute ###########################
    #############################################################
    # parse the arguments
    args = parser.parse_args(argv)

    if not args.sub_command:
        parser.print_usage()
        _exit_application("", ExitCode.INVALID_INPUT)

    if args.sub_command == "thresholds":
        payload = ThresholdsPayload()
        payload.n = args.n
        payload.K = args.K
        payload.q = args.q
        command = ThresholdsCommand(base_wd)

    elif args.sub_command == "laplacian":
        payload = LaplacianPayload()
        payload.map_spec = args.map
        payload.point = args.point
        payload.q = args.q
        payload.oracle = args.oracle
        payload.fd_step = args.fd_step
        command = LaplacianCommand(base_wd)

    elif args.sub_command == "verify":
        payload = VerifyPayload()
        payload.map_spec = args.map
        payload.domain = args.domain
        payload.q = args.q
        payload.witness_points = args.witness_point
        command = VerifyCommand(base_wd)

    elif args.sub_command == "witness":
        payload = WitnessPayload()
        payload.n = args.n
        payload.K = args.K
        payload.q = args.q
        command = WitnessCommand(base_wd)

    elif args.sub_command == "sweep":
        payload = SweepPayload()
        payload.config_path = args.config
        payload.timing = args.timing
        command = SweepCommand(base_wd)

    elif args.sub_command == "distortion":
        payload = DistortionPayload()
        payload.map_spec = args.map
        payload.point = args.point
        payload.domain = args.domain
        command = DistortionCommand(base_wd)

    # global args
    payload.seed = args.seed
    payload.samples = args.samples
    payload.tol = args.tol
    payload.output_format = args.format
    payload.file_output = args.out
    payload.progress_mode = args.progress_mode

    try:
        result: CommandResult = command.run(payload)
    except NoWitnessRequiredError as e:
        _exit_application(str(e), ExitCode.NO_WITNESS)
    except OracleMismatchError as e:
        _exit_application(str(e), ExitCode.CROSS_CHECK_FAILED)
    except QHarmError as e:
        _exit_application(str(e), ExitCode.INVALID_INPUT)

    command.emit(result, payload)
    _exit_application("", result.exit_code)
