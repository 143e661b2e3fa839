"""Command-line front end: every subcommand prints one JSON report.

Report schema: {"command", "inputs", "outputs", "tolerances", "version"};
complex numbers are [re, im] pairs, angles are radians. Exit codes:
0 success, 1 negative domain verdict (not product / not reducible /
not local / irreducible) with a full report, 2 input or usage error.
Reports are deterministic for fixed inputs and seed; the repro table's
wall-clock details go to stderr so stdout stays byte-reproducible.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import EgeoError
from .gluing_sim import (
    HolonomyConfig,
    SpinChainParams,
    apply_holonomy,
    glue_ground_state,
    ground_state,
    is_local_operator,
    loop_holonomy,
    spin_hamiltonian,
    to_qudit_pair,
)
from .cech_brauer import (
    CechCover,
    check_reduction,
    class_order,
    is_2cocycle,
    make_cover,
    pgl_cocycle_defect,
    symbol_cover,
    validate_nerve,
)
from .rank_geometry import (
    determinantal_degree,
    determinantal_dim,
    flattening_lower_bound,
    hilbert_function,
    rank_2x2x2,
    secant_expected_dim,
)
from .repro import DEFAULT_SEED, run_battery
from .separability import separability_report
from .spectral_satake import (
    SpectralClass,
    d_product_oracle,
    elem_sym,
    is_22_product,
    is_222_product,
)
from .splitting_p1 import SplittingType, factor_sumset
from .tensor_core import (
    DEFAULT_RANK_TOL,
    Bipartition,
    PureState,
    flatten,
    make_state,
    numerical_rank,
    schmidt_decompose,
)

# ------------------------------------------------------------ serialization


def c2pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def matrix_json(m: np.ndarray) -> list:
    return [[c2pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def vector_json(v: np.ndarray) -> list:
    return [c2pair(z) for z in np.asarray(v, dtype=complex).ravel()]


def _as_complex(entry) -> complex:
    if isinstance(entry, (int, float)):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(float(entry[0]), float(entry[1]))
    raise EgeoError(f"cannot read complex value from {entry!r} (expected [re, im])")


def load_state(path: str) -> PureState:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return make_state(data["dims"], [_as_complex(c) for c in data["coeffs"]])


def state_json(state: PureState) -> dict:
    return {"dims": list(state.dims), "coeffs": vector_json(state.coeffs)}


def partition_json(p) -> dict:
    return {"n": p.n_subsystems, "blocks": [list(b) for b in p.blocks]}


def cover_to_json(cover: CechCover) -> dict:
    return {
        "n": cover.n,
        "m": cover.m,
        "charts": cover.chart_count,
        "pairs": [
            {"i": i, "j": j, "lift": matrix_json(cover.transitions[(i, j)])} for i, j in cover.pairs
        ],
        "triples": [list(t) for t in cover.triples],
        "quads": [list(q) for q in cover.quadruples],
    }


def cover_from_json(data: dict) -> CechCover:
    pairs = [
        (int(p["i"]), int(p["j"]), [[_as_complex(z) for z in row] for row in p["lift"]])
        for p in data["pairs"]
    ]
    return make_cover(
        int(data["n"]),
        pairs,
        [tuple(t) for t in data.get("triples", [])],
        [tuple(q) for q in data.get("quads", [])],
        m=data.get("m"),
        chart_count=data.get("charts"),
    )


def _parse_ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x != ""]


def _parse_eigs(text: str) -> list[complex]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [float(x) for x in chunk.split(",")]
        out.append(complex(parts[0], parts[1] if len(parts) > 1 else 0.0))
    return out


# ------------------------------------------------------------ subcommands


def cmd_schmidt(args) -> tuple[dict, dict, int]:
    state = load_state(args.state)
    cut = Bipartition(state.n_subsystems, tuple(_parse_ints(args.cut)))
    sd = schmidt_decompose(state, cut, args.tol)
    outputs = {
        "rank": sd.rank,
        "sigmas": [float(s) for s in sd.sigmas],
        "left_vecs": matrix_json(sd.left_vecs),
        "right_vecs": matrix_json(sd.right_vecs),
        "input_norm": sd.input_norm,
        "cut": {"block_a": list(cut.block_a), "block_b": list(cut.block_b)},
    }
    return {"state": state_json(state), "cut": args.cut}, outputs, 0


def cmd_separability(args) -> tuple[dict, dict, int]:
    state = load_state(args.state)
    rep = separability_report(state, args.tol)
    outputs = {
        "finest": partition_json(rep.finest),
        "product_bipartitions": [list(c.block_a) for c in rep.product_bipartitions],
        "gme": rep.gme,
    }
    return {"state": state_json(state)}, outputs, 0


def cmd_invariants(args) -> tuple[dict, dict, int]:
    d_a, d_b = args.da, args.db
    ranks = [args.r] if args.r else list(range(1, min(d_a, d_b) + 1))
    table = []
    for r in ranks:
        dim, codim = determinantal_dim(d_a, d_b, r)
        table.append(
            {
                "r": r,
                "dim": dim,
                "codim": codim,
                "degree": determinantal_degree(d_a, d_b, r),
                "hilbert": [hilbert_function(d_a, d_b, r, t) for t in range(args.tmax + 1)],
                "secant_expected_dim": secant_expected_dim((d_a, d_b), r),
            }
        )
    inputs = {"da": d_a, "db": d_b, "r": args.r, "tmax": args.tmax}
    return inputs, {"table": table}, 0


def cmd_rank222(args) -> tuple[dict, dict, int]:
    state = load_state(args.state)
    outputs = {
        "rank": rank_2x2x2(state, args.tol),
        "flattening_lower_bound": flattening_lower_bound(state, args.tol),
    }
    return {"state": state_json(state)}, outputs, 0


def cmd_holonomy(args) -> tuple[dict, dict, int]:
    base = (complex(np.cos(args.theta_u), np.sin(args.theta_u)), 1.0 + 0j)
    cfg = HolonomyConfig(p=args.p, base_point=base, loop_word=args.loop)
    hol = loop_holonomy(cfg)
    local = is_local_operator(hol, args.p, args.p, args.tol)
    demo = make_state([args.p, args.p], [1 if (a, b) in ((0, 0), (1, 0)) else 0 for a in range(args.p) for b in range(args.p)])
    image = apply_holonomy(hol, demo)
    cut = Bipartition(2, (0,))
    outputs = {
        "holonomy": matrix_json(hol.lift),
        "local_operation": local,
        "schmidt_rank_before": numerical_rank(flatten(demo, cut), args.tol),
        "schmidt_rank_after": numerical_rank(flatten(image, cut), args.tol),
    }
    inputs = {"p": args.p, "loop": args.loop, "theta_u": args.theta_u, "branch": args.branch}
    return inputs, outputs, 0 if local else 1


def cmd_spinchain(args) -> tuple[dict, dict, int]:
    params = SpinChainParams(args.j, args.delta, args.theta_u, args.branch)
    h = spin_hamiltonian(params)
    gs = ground_state(params)
    glued = glue_ground_state(params)
    cut = Bipartition(2, (0,))
    outputs = {
        "hamiltonian": matrix_json(h),
        "spectrum": [float(v) for v in np.linalg.eigvalsh(h)],
        "ground_state": vector_json(gs.coeffs),
        "glued_state": vector_json(glued.coeffs),
        "schmidt_rank_before": numerical_rank(flatten(to_qudit_pair(gs, 2), cut)),
        "schmidt_rank_after": numerical_rank(flatten(glued, cut)),
    }
    inputs = {"theta_u": args.theta_u, "j": args.j, "delta": args.delta, "branch": args.branch}
    return inputs, outputs, 0


def cmd_cech(args) -> tuple[dict, dict, int]:
    if args.cover:
        with open(args.cover, encoding="utf-8") as fh:
            cover = cover_from_json(json.load(fh))
        inputs = {"cover": args.cover, "da": args.da, "db": args.db}
    else:
        cover = symbol_cover(args.p)
        inputs = {"p": args.p, "da": args.da, "db": args.db}
    d_a = args.da or (int(round(cover.n ** 0.5)))
    d_b = args.db or (cover.n // d_a)
    validate_nerve(cover)
    defect = pgl_cocycle_defect(cover)
    report = check_reduction(cover, d_a, d_b, args.tol)
    outputs = {
        "charts": cover.chart_count,
        "m": defect.m,
        "defect_exponents": {f"{i},{j},{k}": e for (i, j, k), e in sorted(defect.values.items())},
        "is_2cocycle": is_2cocycle(defect, cover),
        "class_order": class_order(defect, cover),
        "torsion_bound": report.torsion,
        "pair_locality": {f"{i},{j}": v for (i, j), v in sorted(report.pair_verdicts.items())},
        "reducible": report.reducible,
    }
    if args.save_cover:
        with open(args.save_cover, "w", encoding="utf-8") as fh:
            json.dump(cover_to_json(cover), fh)
    return inputs, outputs, 0 if report.reducible else 1


def cmd_split(args) -> tuple[dict, dict, int]:
    degrees = SplittingType(tuple(_parse_ints(args.degrees)))
    d_a, d_b = (int(x) for x in args.shape.lower().split("x"))
    fact = factor_sumset(degrees, d_a, d_b)
    inputs = {"degrees": list(degrees.degrees), "shape": [d_a, d_b]}
    if fact is None:
        return inputs, {"reducible": False, "verdict": "irreducible"}, 1
    outputs = {
        "reducible": True,
        "b": list(fact.b),
        "c": list(fact.c),
        "t": fact.t,
    }
    return inputs, outputs, 0


def cmd_satake(args) -> tuple[dict, dict, int]:
    dims = tuple(_parse_ints(args.d))
    s = SpectralClass(tuple(_parse_eigs(args.eigs)))
    e = elem_sym(s)
    witness = None
    if dims == (2, 2):
        verdict, w22 = is_22_product(s, args.tol)
        if w22 is not None:
            witness = [[c2pair(w22[0]), c2pair(1 / w22[0])], [c2pair(w22[1]), c2pair(1 / w22[1])]]
    elif dims == (2, 2, 2):
        verdict = is_222_product(s, args.tol)
    else:
        verdict = d_product_oracle(s, dims, args.tol) is not None
    oracle = d_product_oracle(s, dims, args.tol)
    if witness is None and oracle is not None:
        witness = [[c2pair(z) for z in factor] for factor in oracle.factors]
    outputs = {
        "verdict": verdict,
        "oracle_agrees": (oracle is not None) == verdict,
        "e_values": [c2pair(x) for x in e],
        "witness": witness,
    }
    inputs = {"eigs": args.eigs, "d": list(dims)}
    return inputs, outputs, 0 if verdict else 1


def cmd_repro(args) -> tuple[dict, dict, int]:
    names = args.only.split(",") if args.only else None
    results = run_battery(seed=args.seed, names=names)
    if not results:
        raise EgeoError(f"no checks match {args.only!r}")
    width = max(len(r.name) for r in results)
    for r in results:
        line = f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.elapsed * 1e3:8.1f} ms  {r.detail}"
        print(line, file=sys.stderr)
    outputs = {
        "checks": [{"name": r.name, "passed": r.passed} for r in results],
        "all_passed": all(r.passed for r in results),
    }
    inputs = {"seed": args.seed, "only": args.only}
    return inputs, outputs, 0 if outputs["all_passed"] else 1


# ------------------------------------------------------------ wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egeo",
        description=(
            "Entanglement geometry toolkit. Every subcommand prints a JSON report on stdout; "
            "exit 0 = success, 1 = negative domain verdict (not product, not reducible, "
            "not local, irreducible), 2 = usage or input error."
        ),
    )
    parser.add_argument("--version", action="version", version=f"egeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_tol(p):
        p.add_argument("--tol", type=float, default=DEFAULT_RANK_TOL, help="relative rank tolerance (default 1e-9)")

    p = sub.add_parser("schmidt", help="Schmidt decomposition and rank across a cut")
    p.add_argument("--state", required=True, help='state JSON file: {"dims": [...], "coeffs": [[re, im], ...]}')
    p.add_argument("--cut", required=True, help="comma-separated subsystem indices of block A, e.g. 0 or 0,2")
    add_tol(p)
    p.set_defaults(handler=cmd_schmidt)

    p = sub.add_parser("separability", help="finest product partition and GME verdict")
    p.add_argument("--state", required=True)
    add_tol(p)
    p.set_defaults(handler=cmd_separability)

    p = sub.add_parser("invariants", help="determinantal dim/codim/degree and Hilbert table")
    p.add_argument("--da", type=int, required=True)
    p.add_argument("--db", type=int, required=True)
    p.add_argument("--r", type=int, default=None, help="specific rank bound (default: all)")
    p.add_argument("--tmax", type=int, default=6, help="Hilbert function computed for t = 0..tmax (default 6)")
    p.set_defaults(handler=cmd_invariants)

    p = sub.add_parser("rank222", help="exact tensor rank of a 2x2x2 state")
    p.add_argument("--state", required=True)
    add_tol(p)
    p.set_defaults(handler=cmd_rank222)

    p = sub.add_parser("holonomy", help="evaluate a loop word; locality and entangling demo")
    p.add_argument("--p", type=int, required=True, help="local dimension; the system has dimension p^2")
    p.add_argument("--loop", required=True, help="word over u, U, v, V (capitals are inverse loops)")
    p.add_argument("--theta-u", type=float, default=0.0, help="base point angle in radians (default 0)")
    p.add_argument("--branch", type=int, default=0, help="branch sheet index, echoed in the report (default 0)")
    add_tol(p)
    p.set_defaults(handler=cmd_holonomy)

    p = sub.add_parser("spinchain", help="one-magnon spectrum and the glued ground state")
    p.add_argument("--theta-u", type=float, default=0.0, help="angle of u on the unit circle, radians (default 0)")
    p.add_argument("--j", type=float, default=1.0, help="hopping coupling J > 0 (default 1)")
    p.add_argument("--delta", type=float, default=2.0, help="penalty Delta > J (default 2)")
    p.add_argument("--branch", type=int, default=0, help="fourth-root branch k in 0..3 (default 0)")
    p.set_defaults(handler=cmd_spinchain)

    p = sub.add_parser("cech", help="cocycle defect, class order, reduction verdict")
    p.add_argument("--p", type=int, default=2, help="build the symbol cover for this p (default 2)")
    p.add_argument("--cover", default=None, help="cover JSON file instead of the generated symbol cover")
    p.add_argument("--da", type=int, default=None, help="A-side dimension for the reduction test")
    p.add_argument("--db", type=int, default=None, help="B-side dimension for the reduction test")
    p.add_argument("--save-cover", default=None, help="write the analyzed cover to this JSON file")
    add_tol(p)
    p.set_defaults(handler=cmd_cech)

    p = sub.add_parser("split", help="sumset factorization of a splitting type")
    p.add_argument("--degrees", required=True, help="comma-separated integers, e.g. 0,1,2,3")
    p.add_argument("--shape", required=True, help="factor shape, e.g. 2x2")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("satake", help="spectral product criteria with oracle cross-check")
    p.add_argument("--eigs", required=True, help='semicolon-separated "re,im" eigenvalues')
    p.add_argument("--d", required=True, help="type, e.g. 2,2 or 2,2,2")
    add_tol(p)
    p.set_defaults(handler=cmd_satake)

    p = sub.add_parser("repro", help="run the full reproduction battery (table on stderr)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--only", default=None, help="comma-separated check names to run")
    p.set_defaults(handler=cmd_repro)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    tolerances = {"rank_tol": getattr(args, "tol", DEFAULT_RANK_TOL)}
    try:
        inputs, outputs, code = args.handler(args)
    except (ValueError, OSError, KeyError) as exc:  # EgeoError is a ValueError
        print(json.dumps({"command": args.command, "error": str(exc), "version": __version__}), file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "inputs": inputs,
        "outputs": outputs,
        "tolerances": tolerances,
        "version": __version__,
    }
    print(json.dumps(report, sort_keys=True))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
