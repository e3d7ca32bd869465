#!/bin/env python
"""
SCLIC: Stable CLosedness of Images of Convex sets

Command line interface
"""
import argparse
import logging
import sys

import numpy as np

from ._version import __version__
from .certify.classify import classify
from .certify.construct import preimage_witness, repair
from .certify.neighborhood import neighborhood_check
from .certify.radius import stability_radius_A
from .convex.sets import asymptotic_cone
from .data import dump_json, map_to_dict, read_map, read_set, write_json
from .errors import InputError, SclicError
from .porosity import oracles
from .porosity.bounds import verify_preimage_porosity
from .porosity.estimate import porosity_estimate, radius_schedule
from .survey import survey, witness_nonclosed_demo
from .utils.tolerances import Tolerances

LOG = logging.getLogger(__name__)

ORACLES = ["point", "hyperplane", "line", "whole", "circle", "rank-deficient"]

class _ArgumentParser(argparse.ArgumentParser):
    """
    Argument errors are reported in the same ERROR:<name>:<message> form as other
    input errors
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"ERROR:InputError:{message}\n")

def _setup_logging(args):
    if args.debug:
        logging.getLogger("sclic").setLevel(logging.DEBUG)
    else:
        logging.getLogger("sclic").setLevel(logging.INFO)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(logging.DEBUG)
    formatter = logging.Formatter('%(levelname)s: %(message)s')
    handler.setFormatter(formatter)
    logging.getLogger().addHandler(handler)
    return handler

def _emit(data, args):
    """
    Write result JSON to standard output and to --out if given
    """
    print(dump_json(data))
    if args.out:
        write_json(data, args.out)
        LOG.info(f"Output written to {args.out}")

def _certify(args, tols):
    X, T = read_set(args.set), read_map(args.map)
    certificate = classify(T, X, tols, seed=args.seed)
    result = certificate.to_dict()
    if args.recheck_radius is not None:
        samples = 100 if args.samples is None else args.samples
        check = neighborhood_check(T, X, args.recheck_radius, samples, args.seed, args.workers, tols, certificate)
        result["neighborhood_check"] = check.to_dict()
    _emit(result, args)

def _radius(args, tols):
    X, T = read_set(args.set), read_map(args.map)
    K = asymptotic_cone(X, tols)
    _emit({"radius": stability_radius_A(T, K, tols, args.seed)}, args)

def _preimage(args, tols):
    X, T = read_set(args.set), read_map(args.map)
    witness = preimage_witness(T, X, args.target, args.margin, tols)
    _emit(witness.to_dict(), args)

def _repair(args, tols):
    X, T = read_set(args.set), read_map(args.map)
    repaired = repair(T, X, args.eps, tols)
    result = map_to_dict(repaired)
    result["perturbation_norm"] = (repaired - T).operator_norm
    result["certificate"] = classify(repaired, X, tols, seed=args.seed).to_dict()
    _emit(result, args)

def _oracle(args):
    """
    :return: Tuple of (oracle, default point on the set)
    """
    dim = args.dim
    if args.oracle == "circle":
        return oracles.circle(), np.array([1.0, 0.0])
    if args.oracle == "rank-deficient":
        at = np.zeros((dim, dim))
        at[0, 0] = 1
        return oracles.rank_deficient(dim, dim), at.ravel()
    origin = np.zeros(dim)
    if args.oracle == "point":
        return oracles.point_set(origin), origin
    if args.oracle == "hyperplane":
        return oracles.hyperplane(np.eye(dim)[-1]), origin
    if args.oracle == "line":
        return oracles.line(origin, np.eye(dim)[0]), origin
    return oracles.whole_space(dim), origin

def _porosity(args, tols):
    oracle, at = _oracle(args)
    if args.at is not None:
        at = np.array(args.at, dtype=float)
    radii = radius_schedule(args.radius, args.levels)
    budget = args.budget if args.budget is not None else (100000 if args.samples is None else args.samples)
    if args.pullback:
        f = read_map(args.pullback)
        check = verify_preimage_porosity(f, oracle, at, budget, args.seed, radii, tols)
        _emit(dict(check), args)
    else:
        _emit(porosity_estimate(at, oracle, radii, budget, args.seed).to_dict(), args)

def _survey(args, tols):
    if not args.out:
        raise InputError("Survey needs an output file (--out)")
    X = read_set(args.set)
    report = survey(X, args.m, 10000 if args.samples is None else args.samples, args.seed, tols, args.recheck_every,
                    args.recheck_samples, args.workers)
    report.write(args.out)
    print(dump_json(report))

def _demo(args, tols):
    seq = witness_nonclosed_demo(args.k, args.eps, tols)
    _emit(seq.to_dict(), args)

def _parser():
    common = _ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=0, help='Random seed')
    common.add_argument('--tol-rank', type=float, help='Relative singular value threshold for numerical rank (default 1e-9)')
    common.add_argument('--tol-lp', type=float, help='LP pivot and feasibility tolerance (default 1e-9)')
    common.add_argument('--samples', type=int, help='Number of random samples')
    common.add_argument('--out', help='Output file')
    common.add_argument('--workers', type=int, default=1, help='Number of worker threads')
    common.add_argument('--debug', action="store_true", default=False, help="Enable debug logging")

    parser = _ArgumentParser('sclic', description='Stable closedness of linear images of convex sets', add_help=True)
    subparsers = parser.add_subparsers(dest="command")

    def _with_inputs(name, desc, needs_map=True):
        sub = subparsers.add_parser(name, parents=[common], help=desc, description=desc)
        sub.add_argument('--set', required=True, help='JSON set description file')
        if needs_map:
            sub.add_argument('--map', required=True, help='JSON linear map file')
        return sub

    sub = _with_inputs("certify", "Classify a map against a set")
    sub.add_argument('--recheck-radius', type=float, help='Check the certificate persists for random maps within this operator norm distance')
    sub.set_defaults(func=_certify)

    sub = _with_inputs("radius", "Stability radius of a map whose kernel meets the asymptotic cone only at zero")
    sub.set_defaults(func=_radius)

    sub = _with_inputs("preimage", "Explicit preimage of a target in the asymptotic cone")
    sub.add_argument('--target', type=float, nargs="+", required=True, help='Target point y')
    sub.add_argument('--margin', type=float, default=0.01, help='Relative margin on the ray parameter')
    sub.set_defaults(func=_preimage)

    sub = _with_inputs("repair", "Nearby map with an interior kernel ray")
    sub.add_argument('--eps', type=float, default=0.01, help='Repair parameter in (0, 1)')
    sub.set_defaults(func=_repair)

    sub = subparsers.add_parser("porosity", parents=[common], help="Estimate porosity of a built-in set",
                                description="Estimate porosity of a built-in set")
    sub.add_argument('--oracle', choices=ORACLES, default="hyperplane", help='Built-in set')
    sub.add_argument('--dim', type=int, default=3, help='Ambient dimension (matrix size for rank-deficient)')
    sub.add_argument('--at', type=float, nargs="+", help='Point at which to estimate porosity, defaults to a point on the set')
    sub.add_argument('--budget', type=int, help='Candidate centres per radius (default 100000)')
    sub.add_argument('--radius', type=float, default=1.0, help='Largest radius of the schedule')
    sub.add_argument('--levels', type=int, default=11, help='Number of radii, halving each time')
    sub.add_argument('--pullback', help='JSON map file: compare porosity of the preimage of the set with the bound')
    sub.set_defaults(func=_porosity)

    sub = _with_inputs("survey", "Classify random Gaussian maps against a set", needs_map=False)
    sub.add_argument('--m', type=int, required=True, help='Number of rows of the random maps')
    sub.add_argument('--recheck-every', type=int, default=100, help='Neighbourhood check every N-th certified sample, 0 to disable')
    sub.add_argument('--recheck-samples', type=int, default=20, help='Perturbations per neighbourhood check')
    sub.set_defaults(func=_survey)

    sub = subparsers.add_parser("demo-nonclosed", parents=[common], help="Sequence with a non-closed linear image",
                                description="Sequence with a non-closed linear image")
    sub.add_argument('--k', type=int, default=10, help='Number of sequence points')
    sub.add_argument('--eps', type=float, default=0.01, help='Repair parameter for the follow up preimage')
    sub.set_defaults(func=_demo)
    return parser

def main(argv=None):
    """
    Certify stable closedness of linear images of convex sets
    """
    parser = _parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("ERROR:InputError:No command given\n")
        return 2

    handler = _setup_logging(args)
    try:
        LOG.info(f"SCLIC: Stable CLosedness of Images of Convex sets v{__version__}")
        try:
            tols = Tolerances.from_args(args)
        except ValueError as exc:
            raise InputError(str(exc))
        args.func(args, tols)
        return 0
    except SclicError as exc:
        sys.stderr.write(f"ERROR:{type(exc).__name__}:{exc}\n")
        return exc.exit_code
    except (IOError, ValueError) as exc:
        sys.stderr.write(f"ERROR:InputError:{exc}\n")
        return 2
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"ERROR:NumericFailure:{exc}\n")
        return 3
    finally:
        logging.getLogger().removeHandler(handler)

if __name__ == "__main__":
    sys.exit(main())
