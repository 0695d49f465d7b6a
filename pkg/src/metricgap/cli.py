"""Command line front end.

Every subcommand reads UTF-8 JSON inputs, runs one experiment, and
writes a JSON (optionally CSV) report embedding the resolved experiment
spec, the tool version, and full provenance.  Reports are byte-stable:
identical specs produce identical bytes.  Exit codes: 0 success, 1
validation error (including malformed JSON, reported with line and
column), 2 numerical failure such as solver non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .boost import boost_config
from .certificates import (
    Certificate,
    dim_certificate,
    enflo_cube_check,
    enflo_lower,
    expander_avg_lower,
)
from .embeddings import (
    EmbeddingMap,
    line_embed,
    sl_character_embed,
    snowflake_self_embed,
    transfer_snowflake,
)
from .errors import NumericalFailure, ValidationError
from .graphs import Graph, bfs_metric, cayley_sl, complete, cycle, hypercube, random_regular
from .kernels import StochasticKernel, graph_kernel, spectrum
from .metrics import (
    FiniteMetricSpace,
    NormedHost,
    PointConfig,
    distance_matrix,
    lp_host,
)
from .normalization import eta, psi_omega
from .rayleigh import (
    gamma_lower_bound_search,
    markov_type_ratio,
    scalar_extrapolation_check,
    vector_extrapolation_bound,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _thread_cap() -> int:
    raw = os.environ.get("AVGJOHN_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValidationError("AVGJOHN_THREADS must be an integer") from None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ValidationError("input file not found: %s" % path) from None
    except json.JSONDecodeError as exc:
        raise ValidationError(
            "malformed JSON in %s at line %d column %d: %s"
            % (path, exc.lineno, exc.colno, exc.msg)
        ) from None


def _write_report(report: dict, args) -> None:
    fmt = args.format
    if fmt == "csv":
        cert = report["result"].get("certificate")
        if cert is None:
            raise ValidationError("CSV output is only available for certificates")
        text = Certificate.csv_header() + "\n" + _csv_row_from_dict(cert) + "\n"
    else:
        text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_row_from_dict(cert: dict) -> str:
    prov = cert.get("provenance", {})
    vals = (
        cert["kind"],
        prov.get("n", ""),
        prov.get("gap", ""),
        prov.get("ratio", ""),
        cert["exponent"],
        cert["parametric_constant"],
        cert["bound"],
    )
    return ",".join(str(v) for v in vals)


def _report(args, result: dict) -> dict:
    # the output path is where the report lands, not part of the
    # experiment; leaving it out keeps reports byte-identical across
    # runs that differ only in destination
    spec = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}
    return {
        "spec": _jsonable(spec),
        "version": __version__,
        "threads": _thread_cap(),
        "result": _jsonable(result),
    }


def _build_family(family: str, params: dict, seed: int) -> Graph:
    if family == "hypercube":
        return hypercube(int(params.get("k", 3)))
    if family == "cycle":
        return cycle(int(params.get("n", 8)))
    if family == "complete":
        return complete(int(params.get("n", 4)))
    if family == "random_regular":
        return random_regular(
            int(params.get("n", 8)),
            int(params.get("delta", 3)),
            seed=int(params.get("seed", seed)),
        )
    if family == "cayley_sl":
        return cayley_sl(int(params.get("k", 2)), int(params.get("q", 3))).graph
    raise ValidationError("unknown graph family %r" % family)


def _graph_from_json(obj: dict, seed: int = 0) -> Graph:
    """Accept either a graph {"n", "edges"} or a builder spec
    {"family": ..., params}."""
    if "edges" in obj:
        return Graph.from_json_dict(obj)
    if "family" in obj:
        return _build_family(obj["family"], obj, seed)
    raise ValidationError("JSON is neither a graph nor a graph builder spec")


def _graph_from_args(args) -> Graph:
    if getattr(args, "infile", None):
        return _graph_from_json(_load_json(args.infile), seed=args.seed)
    family = getattr(args, "family", None)
    if family == "hypercube" or family == "cayley_sl":
        return _build_family(
            family, {"k": args.k, "q": args.q}, args.seed
        )
    if family in ("cycle", "complete", "random_regular"):
        return _build_family(
            family, {"n": args.n, "delta": args.delta}, args.seed
        )
    raise ValidationError("provide --in GRAPH.json or --family")


def _kernel_from_args(args) -> StochasticKernel:
    obj = _load_json(args.infile)
    if "a" in obj:
        return StochasticKernel.from_json_dict(obj)
    return graph_kernel(_graph_from_json(obj, seed=args.seed))


def _host_from_args(args) -> NormedHost:
    p = float("inf") if args.host_p == "inf" else float(args.host_p)
    return lp_host(p, args.host_dim)


def _weights_from_args(args, n):
    if getattr(args, "weights", None):
        return np.asarray(_load_json(args.weights), dtype=float)
    return None


# --------------------------------------------------------------------------
# subcommand handlers


def _cmd_gen_graph(args):
    g = _graph_from_args(args)
    return {"graph": g.to_json_dict(), "regularity": g.regularity}


def _cmd_spectrum(args):
    k = _kernel_from_args(args)
    return {"spectrum": spectrum(k).to_json_dict(), "n": k.n}


def _cmd_gamma_est(args):
    k = _kernel_from_args(args)
    host = _host_from_args(args)
    report, witness = gamma_lower_bound_search(
        k, host, args.p, budget=args.budget, seed=args.seed
    )
    return {
        "rayleigh": report.to_json_dict(),
        "witness": witness.to_json_dict(),
        "euclidean_reference": 1.0 / spectrum(k).gap if spectrum(k).gap > 0 else "inf",
    }


def _cmd_mtype(args):
    k = _kernel_from_args(args)
    if args.config:
        m = distance_matrix(PointConfig.from_json_dict(_load_json(args.config)))
    else:
        m = FiniteMetricSpace.from_json_dict(_load_json(args.metric))
    value = markov_type_ratio(k, m, args.p, args.s)
    return {"markov_type_ratio": value, "p": args.p, "s": args.s}


def _cmd_extrapolate(args):
    k = _kernel_from_args(args)
    if args.mode == "scalar":
        values = np.asarray(_load_json(args.values), dtype=float)
        check = scalar_extrapolation_check(k, values, args.beta)
    else:
        config = PointConfig.from_json_dict(_load_json(args.config))
        check = vector_extrapolation_bound(k, config, args.q)
    return {"check": check.to_json_dict(), "mode": args.mode}


def _cmd_boost(args):
    config = PointConfig.from_json_dict(_load_json(args.config))
    kernel = None
    kernels = ()
    if args.kernel:
        kernel = StochasticKernel.from_json_dict(_load_json(args.kernel))
        kernels = (kernel,)
    pi = kernel.pi if kernel is not None else None
    result = boost_config(
        pi, config, args.p, args.q, kernels=kernels, tol=args.tol, seed=args.seed
    )
    return {"boost": result.to_json_dict()}


def _cmd_self_embed(args):
    config = PointConfig.from_json_dict(_load_json(args.config))
    w = _weights_from_args(args, config.n)
    emb, summary = snowflake_self_embed(config, w, args.p, args.omega)
    return {"embedding": emb.to_json_dict(), "distortion": summary.to_json_dict()}


def _cmd_transfer(args):
    m = FiniteMetricSpace.from_json_dict(_load_json(args.metric))
    w = _weights_from_args(args, m.n)
    emb, summary = transfer_snowflake(m, w, args.p, args.q, args.omega)
    return {"embedding": emb.to_json_dict(), "distortion": summary.to_json_dict()}


def _cmd_line_embed(args):
    m = FiniteMetricSpace.from_json_dict(_load_json(args.metric))
    w = _weights_from_args(args, m.n)
    emb, summary = line_embed(m, w, args.q)
    return {"embedding": emb.to_json_dict(), "distortion": summary.to_json_dict()}


def _cmd_certify_dim(args):
    config = PointConfig.from_json_dict(_load_json(args.config))
    kernel = _kernel_from_args(args)
    cert = dim_certificate(config, kernel, args.p, constant=args.constant)
    return {"certificate": cert.to_json_dict()}


def _cmd_expander_bound(args):
    g = _graph_from_args(args)
    cert = expander_avg_lower(g, args.omega)
    return {"certificate": cert.to_json_dict()}


def _cmd_hypercube_enflo(args):
    cert = enflo_lower(args.k, args.eps)
    g = hypercube(args.k)
    metric, _ = bfs_metric(g)
    identity = EmbeddingMap(
        metric,
        PointConfig(
            lp_host(2.0, args.k),
            np.array(
                [[(v >> b) & 1 for b in range(args.k)] for v in range(g.n)], float
            ),
        ),
        np.full(g.n, 1.0 / g.n),
    )
    check = enflo_cube_check(identity)
    return {
        "certificate": cert.to_json_dict(),
        "identity_map_check": check.to_json_dict(),
    }


def _cmd_slk(args):
    group = cayley_sl(args.k, args.q)
    emb, summary = sl_character_embed(args.k, args.q, args.constant, group=group)
    return {
        "order": group.order,
        "diameter": group.diameter,
        "regularity": group.graph.regularity,
        "distortion": summary.to_json_dict(),
    }


def _cmd_eta(args):
    return {"eta": eta(args.p, args.omega), "p": args.p, "omega": args.omega}


def _cmd_psi(args):
    return {"psi": psi_omega(args.rho, args.omega), "rho": args.rho, "omega": args.omega}


def _cmd_report(args):
    obj = _load_json(args.infile)
    cert = obj.get("result", {}).get("certificate") or obj.get("certificate")
    if cert is None:
        raise ValidationError("no certificate found in %s" % args.infile)
    return {"certificate": cert}


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metricgap",
        description="spectral-gap, embedding and certificate experiments",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--budget", type=int, default=20)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    def add_family(p, need_graph=True):
        p.add_argument("--in", dest="infile", default=None, help="graph JSON")
        p.add_argument(
            "--family",
            choices=("hypercube", "cycle", "complete", "random_regular", "cayley_sl"),
        )
        p.add_argument("--k", type=int, default=3)
        p.add_argument("--n", type=int, default=8)
        p.add_argument("--delta", type=int, default=3)
        p.add_argument("--q", type=int, default=3)

    p = add("gen-graph", _cmd_gen_graph, help="build a graph family instance")
    add_family(p)

    p = add("spectrum", _cmd_spectrum, help="spectrum of a kernel or graph walk")
    p.add_argument("--in", dest="infile", required=True, help="kernel or graph JSON")

    p = add("gamma-est", _cmd_gamma_est, help="search a nonlinear-gap lower bound")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--host-p", default="2")
    p.add_argument("--host-dim", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)

    p = add("mtype", _cmd_mtype, help="Markov-type moment ratio")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--metric", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--s", type=int, default=2)

    p = add("extrapolate", _cmd_extrapolate, help="moment extrapolation checks")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=("scalar", "vector"), default="scalar")
    p.add_argument("--values", default=None, help="JSON list, scalar mode")
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--config", default=None, help="config JSON, vector mode")
    p.add_argument("--q", type=float, default=2.0)

    p = add("boost", _cmd_boost, help="centered moment-boosted configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--kernel", default=None)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)

    p = add("self-embed", _cmd_self_embed, help="snowflake self-embedding")
    p.add_argument("--config", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--omega", type=float, default=0.5)

    p = add("transfer", _cmd_transfer, help="exponent-transfer pipeline")
    p.add_argument("--metric", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--omega", type=float, default=0.5)

    p = add("line-embed", _cmd_line_embed, help="distance-to-mean line embedding")
    p.add_argument("--metric", required=True)
    p.add_argument("--weights", default=None)
    p.add_argument("--q", type=float, default=1.0)

    p = add("certify-dim", _cmd_certify_dim, help="dimension lower-bound certificate")
    p.add_argument("--config", required=True)
    p.add_argument("--in", dest="infile", required=True, help="kernel or graph JSON")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--constant", type=float, default=1.0)

    p = add("expander-bound", _cmd_expander_bound, help="explicit snowflake bound")
    add_family(p)
    p.add_argument("--omega", type=float, default=0.5)

    p = add("hypercube-enflo", _cmd_hypercube_enflo, help="cube certificates")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--eps", type=float, default=0.25)

    p = add("slk", _cmd_slk, help="SL_k(F_q) lab")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--constant", type=float, default=1.0)

    p = add("eta", _cmd_eta, help="sharp lower Holder constant")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)

    p = add("psi", _cmd_psi, help="displacement envelope")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)

    p = add("report", _cmd_report, help="re-emit a stored certificate (JSON or CSV)")
    p.add_argument("--in", dest="infile", required=True)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
        _write_report(_report(args, result), args)
        return EXIT_OK
    except ValidationError as exc:
        print("validation error: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalFailure as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL


def main(argv=None) -> None:
    sys.exit(run(argv))
