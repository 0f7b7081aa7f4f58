import argparse
import sys

import numpy as np

from app.harness import EXPERIMENTS, ExperimentConfig, apply_overrides, create_experiment, load_config
from app.utils.errors import DickeError, NumericalError
from app.utils.logger import configure_logging, get_logger

logger = get_logger("dicke")

DESCRIPTIONS = {
    "diag": "diagonalize the truncated Hamiltonian",
    "eigstats": "occupations of eigenstates in an energy window",
    "evolve": "occupations of an evolving coherent state and its time average",
    "separate": "occupations of coherent pairs pulled apart on one shell",
    "saturate": "occupations of coherent mixtures filling the Bloch disk",
    "profile": "energy profiles of eigenstates and a coherent state",
    "dos": "semiclassical density of states against a finite-difference oracle",
    "bound": "phase-space volumes of random states against the coherent-state floor",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override its values")
    common.add_argument("--seed", type=int, help="key of every random stream")
    common.add_argument("--out-dir", help="output directory")
    common.add_argument("--alpha", type=float, action="append", dest="alphas",
                        help="Renyi order, repeatable")
    common.add_argument("--j", type=float, help="pseudo-spin length")
    common.add_argument("--full-scale", action="store_true", default=None,
                        help="j = 30 production settings (hours of runtime)")
    common.add_argument("--save-spectrum", help="store the diagonalized spectrum here")
    common.add_argument("--load-spectrum", help="reuse a stored spectrum")
    common.add_argument("--workers", type=int, help="worker threads")
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--no-color", action="store_true", help="plain log output")

    parser = argparse.ArgumentParser(description="Phase-space localization in the Dicke model")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sub.add_parser(name, parents=[common], help=DESCRIPTIONS[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(verbose=args.verbose, use_color=not args.no_color)
    experiment = None
    try:
        config = load_config(args.config) if args.config else ExperimentConfig()
        config = apply_overrides(config, experiment=args.experiment, seed=args.seed,
                                 out_dir=args.out_dir, alphas=args.alphas, j=args.j,
                                 full_scale=args.full_scale, save_spectrum=args.save_spectrum,
                                 load_spectrum=args.load_spectrum, workers=args.workers)
        experiment = create_experiment(config)
        experiment.execute()
    except DickeError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except (ValueError, np.linalg.LinAlgError, MemoryError, FloatingPointError) as exc:
        logger.error(f"numerical failure, {type(exc).__name__}: {exc}")
        return NumericalError.exit_code
    except KeyboardInterrupt:
        if experiment is not None:
            experiment.print_summary()
        return 130
    return 0


if __name__ == "__main__":
    sys.exit(main())
