"""Command-line front end for the experiment drivers.

Settings are resolved in three layers: built-in defaults, then a ``key=value``
config file (``--config``), then explicit command-line flags.  Exit status is
0 on full success and 1 when any exponent column or command fails, with one
diagnostic line per failure on stderr.
"""

import argparse
import sys
from pathlib import Path

from . import experiments
from .experiments import ExperimentConfig
from .interpolation import SingularSystemError

_TRUE_WORDS = {"1", "true", "yes", "on"}
_FALSE_WORDS = {"0", "false", "no", "off"}

_CONFIG_KEYS = ("n_list", "mu_list", "out", "threads", "deterministic", "eval_density")


def _parse_n_list(text):
    return tuple(int(part) for part in str(text).split(",") if part.strip())


def _parse_mu_list(text):
    return tuple(part.strip() for part in str(text).split(",") if part.strip())


def _parse_bool(text):
    word = str(text).strip().lower()
    if word in _TRUE_WORDS:
        return True
    if word in _FALSE_WORDS:
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def load_config_file(path):
    """Read a simple ``key=value`` file (blank lines and ``#`` comments allowed)."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown key {key!r}; known keys: {', '.join(_CONFIG_KEYS)}")
        values[key] = value.strip()
    return values


def _build_config(args):
    settings = {}
    if args.config is not None:
        raw = load_config_file(args.config)
        if "n_list" in raw:
            settings["n_list"] = _parse_n_list(raw["n_list"])
        if "mu_list" in raw:
            settings["mu_list"] = _parse_mu_list(raw["mu_list"])
        if "out" in raw:
            settings["output_dir"] = Path(raw["out"])
        if "threads" in raw:
            settings["threads"] = int(raw["threads"])
        if "deterministic" in raw:
            settings["deterministic"] = _parse_bool(raw["deterministic"])
        if "eval_density" in raw:
            settings["eval_density"] = int(raw["eval_density"])
    if args.n_list is not None:
        settings["n_list"] = _parse_n_list(args.n_list)
    if args.mu_list is not None:
        settings["mu_list"] = _parse_mu_list(args.mu_list)
    if args.out is not None:
        settings["output_dir"] = Path(args.out)
    if args.threads is not None:
        settings["threads"] = args.threads
    if args.deterministic:
        settings["deterministic"] = True
    return ExperimentConfig(**settings)


def _make_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--n-list", metavar="N1,N2,...",
                        help="comma-separated grid sizes (default depends on the command)")
    shared.add_argument("--mu-list", metavar="M1,M2,...",
                        help="comma-separated exponents, rationals like 7/3 accepted")
    shared.add_argument("--out", metavar="DIR", help="output directory (default: results)")
    shared.add_argument("--threads", type=int, metavar="T",
                        help="BLAS thread cap during computation (0 = library default)")
    shared.add_argument("--deterministic", action="store_true", default=None,
                        help="fixed summation order and single-threaded reductions")
    shared.add_argument("--config", metavar="FILE",
                        help="key=value settings file, overridden by explicit flags")

    parser = argparse.ArgumentParser(
        prog="tpspower",
        description="Thin-plate-spline interpolation error experiments on [0, 1].",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[shared],
                   help="decay tables of the mixed power function (table1..table4.csv)")
    sub.add_parser("peano-table", parents=[shared],
                   help="decay table of the Peano-kernel L1 norm (table5.csv)")
    profile = sub.add_parser("profile", parents=[shared],
                             help="pointwise profile of one error quantity")
    profile.add_argument("--kind", required=True, choices=experiments.PROFILE_KINDS)
    profile.add_argument("--n", required=True, type=int, help="grid size for the profile")
    demo = sub.add_parser("interp-demo", parents=[shared],
                          help="uniform interpolation error against a built-in target")
    demo.add_argument("--target", required=True, choices=sorted(experiments.DEMO_TARGETS))
    sub.add_parser("lebesgue", parents=[shared],
                   help="max of the sum of squared Lagrange values, per grid size")
    return parser


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    try:
        config = _build_config(args)
        failures = {}
        if args.command == "tables":
            result, paths = experiments.run_tables(config)
            failures = result.failures
        elif args.command == "peano-table":
            _, paths = experiments.run_peano_table(config)
        elif args.command == "profile":
            _, paths = experiments.run_profile(config, args.kind, args.n)
        elif args.command == "interp-demo":
            _, paths = experiments.run_interp_demo(config, args.target)
        else:
            _, paths = experiments.run_lebesgue(config)
    except (ValueError, ArithmeticError, SingularSystemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(f"wrote {path}")
    for label, message in failures.items():
        print(f"error: column mu={label}: {message}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
