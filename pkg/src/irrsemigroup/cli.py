"""Command-line front end.

Input files are JSON documents::

    {
      "description": "free text",
      "generators": [
        {"name": "A", "matrix": [[1, 1], [0, 1]]},
        {"name": "B", "matrix": [[0, 0], [1, 0]]}
      ],
      "params": {"length": 12}
    }

``description`` and ``params`` are optional; every generator needs a
``matrix`` given as a list of equal-length rows, and gets ``g<i>`` as a name
when none is supplied.  Recognised params are ``length``, ``horizon``,
``samples``, ``seed``, ``tol_dup`` and ``tol_spec``; command-line flags win
over the file.

Exit status: 0 all checks passed (or purely descriptive output), 1 some
check failed, 2 input or parse error, 3 inconclusive at the requested
length or horizon.
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from importlib import resources

import numpy as np

from .errors import (
    AnalysisError,
    BallExplosion,
    InconclusiveError,
    InputError,
    ReducibleError,
    ReturnHorizonExceeded,
)
from .irreducibility import (
    crosscheck_characterizations,
    exhaustive_is_irreducible,
    is_ideal_irreducible,
)
from .lattice_core import TOL_DUP, TOL_SPEC, as_matrices, frobenius
from .semigroup import generate_ball, right_ideal_analysis
from .spectral import classify_dichotomy, combinatorial_projection, peripheral_split
from .structure import (
    Diagnosis,
    analyze_commuting_pair,
    analyze_single,
    block_decomposition,
    common_eigenspace_dimension,
    common_eigenvector,
    permutation_structure,
    same_range_diagnosis,
    verify_structure_theorems,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3
COMMANDS = ("irreducible", "pf", "semigroup", "pair", "verify")
LENGTH_RANGE = (1, 20)
HORIZON_RANGE = (10, 10_000)

# Result statements attached to each check.
CITATIONS = {
    "scc_matches_exhaustive": "a family is ideal irreducible iff its union positivity digraph is strongly connected",
    "characterizations_agree": "irreducibility: strong connectivity, full orbit ideals and positivity of some word agree",
    "full_cycle": "an irreducible operator cyclically permutes a disjoint positive basis of its peripheral subspace",
    "radii_agree": "period, minimal rank of the closed ray semigroup and peripheral multiplicity coincide",
    "cyclic_action": "T x_i = r(T) x_sigma(i) on the cyclic basis",
    "disjoint_basis": "the cyclic basis vectors are pairwise disjoint",
    "peripheral_roots": "the peripheral spectrum is r(T) times the r-th roots of unity, each simple",
    "projection_routes_agree": "the peripheral projection from block powers equals the spectral one",
    "asymptotic_count": "the closure of the ray semigroup adds exactly r asymptotic rays",
    "eigen_identities": "commuting S, K with one irreducible share x0 > 0 and x0* > 0 with S x0 = lambda x0 and K x0 = r(K) x0",
    "strict_positivity": "the common eigenvector and eigenfunctional are strictly positive",
    "local_radius_K": "lim ||K^n x||^(1/n) = r(K) for every x > 0",
    "local_radius_K_dual": "lim ||K*^n x*||^(1/n) = r(K) for every x* > 0",
    "right_ideal_conditions_agree": "same range, all minimal right ideals two-sided, some two-sided and a unique minimal right ideal are equivalent",
    "same_range_conditions_agree": "projections share a range iff all minimal-rank rays do iff some projection range is invariant",
    "scaled_permutation": "every element acts as a positive multiple of a permutation on the disjoint basis",
    "transitive_group": "the permutation group acts transitively",
    "radius_on_range": "r(S restricted to the common range) equals r(S)",
    "radius_multiplicative": "the spectral radius is multiplicative on the semigroup",
    "group_law": "S -> (c_S, pi_S) is a homomorphism",
    "peripheral_roots_of_unity": "scaled elements have at least r unimodular eigenvalues, all roots of unity on the range",
    "local_radius_primal": "liminf ||S^n x||^(1/n) >= r(S) for x > 0 with a unique minimal projection",
    "local_radius_dual": "liminf ||S*^n x*||^(1/n) >= r(S) for x* > 0 when projections share a range",
    "strongly_expanding_iff_rank_one": "with a unique minimal projection, it is strongly expanding iff r = 1",
    "dual_permutation": "adjoints permute the dual functionals by the inverse permutation",
    "eigenspace_sublattice": "the eigenspace for r(S) is a sublattice",
    "unique_common_eigenvector": "the fixed space of the permutation group is one-dimensional",
    "common_eigenvector": "all elements share the eigenvector x0 = x_1 + ... + x_r",
    "block_pattern": "in block form each element has exactly one nonzero block per row and column",
}


@dataclass
class Report:
    command: str
    input: str
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    status: str = "pass"

    def check(self, name, ok, evidence=None, status=None):
        st = status or ("pass" if ok else "fail")
        self.checks.append({
            "name": name,
            "status": st,
            "citation": CITATIONS.get(name, ""),
            "evidence": evidence or {},
        })
        return st

    def finalize(self):
        if any(c["status"] == "fail" for c in self.checks):
            self.status = "fail"
        elif any(c["status"] == "inconclusive" for c in self.checks):
            self.status = "inconclusive"
        return self


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return {"re": _jsonable(z.real), "im": _jsonable(z.imag)}
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if x != x or x in (float("inf"), float("-inf")):
            return str(x)
        return x
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Diagnosis):
        return obj.value
    return obj


def _fmt(v):
    return json.dumps(_jsonable(v), sort_keys=True)


def emit_report(report, fmt="text"):
    """Serialise a report; json is a single object with sorted keys."""
    if fmt == "json":
        return json.dumps(_jsonable(asdict(report)), sort_keys=True, indent=2)
    lines = [f"INFO command: {report.command}", f"INFO input: {report.input}"]
    for key in sorted(report.results):
        lines.append(f"INFO {key}: {_fmt(report.results[key])}")
    for note in report.notes:
        lines.append(f"INFO note: {note}")
    tag = {"pass": "PASS", "fail": "FAIL", "inconclusive": "INCONCLUSIVE"}
    for c in report.checks:
        prefix = tag.get(c["status"], "INFO")
        line = f"{prefix} {c['name']} [{c['status']}]: {c['citation']}"
        lines.append(line)
        if c["status"] != "pass" and c["evidence"]:
            lines.append(f"    evidence: {_fmt(c['evidence'])}")
    lines.append(f"INFO status: {report.status}")
    return "\n".join(lines)


def parse_matrix_set(path):
    """Read a generator file; returns ``(matrices, metadata)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    return parse_matrix_text(text, str(path))


def parse_matrix_text(text, source="<string>"):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be an object")
    gens = doc.get("generators")
    if not isinstance(gens, list) or not gens:
        raise InputError(f"{source}: 'generators' must be a non-empty list")
    names, mats = [], []
    for i, g in enumerate(gens):
        if not isinstance(g, dict) or "matrix" not in g:
            raise InputError(f"{source}: generator {i} needs a 'matrix' field")
        name = str(g.get("name", f"g{i}"))
        rows = g["matrix"]
        if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
            raise InputError(f"{source}: generator {name}: matrix must be a list of rows")
        width = len(rows[0])
        for k, row in enumerate(rows):
            if len(row) != width:
                raise InputError(
                    f"{source}: generator {name}: ragged rows (row 0 has {width} entries, row {k} has {len(row)})"
                )
            for j, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise InputError(f"{source}: generator {name}: entry ({k}, {j}) is not a number: {v!r}")
        names.append(name)
        mats.append(rows)
    if len(set(names)) != len(names):
        raise InputError(f"{source}: duplicate generator names")
    try:
        mats = as_matrices(mats)
    except InputError as exc:
        msg = str(exc)
        for i, nm in enumerate(names):
            msg = msg.replace(f"generator {i}:", f"generator {nm}:")
        raise InputError(f"{source}: {msg}") from None
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise InputError(f"{source}: 'params' must be an object")
    meta = {"names": names, "description": str(doc.get("description", "")), "params": params}
    return mats, meta


def dump_matrix_set(mats, meta):
    """Inverse of :func:`parse_matrix_text`; floats keep 17 significant digits."""
    doc = {
        "description": meta.get("description", ""),
        "generators": [
            {"name": nm, "matrix": [[float(v) for v in row] for row in np.asarray(M)]}
            for nm, M in zip(meta["names"], mats)
        ],
        "params": meta.get("params", {}),
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def fixture_path(name):
    """Path of a shipped fixture, e.g. ``fixture_path("ex_no_sr")``."""
    return str(resources.files("irrsemigroup") / "fixtures" / f"{name}.json")


def _names(meta, idx):
    return [meta["names"][i] for i in idx]


def _run_irreducible(mats, meta, p, rep):
    n = mats[0].shape[0]
    res = is_ideal_irreducible(mats)
    rep.results["irreducible"] = res.irreducible
    rep.results["n"] = n
    if res.irreducible:
        cert = {f"{i},{j}": "·".join(_names(meta, w)) for (i, j), w in sorted(res.certificate.items())}
        rep.results["certificate"] = cert
    else:
        rep.results["witness"] = res.witness.indices
        for i, M in enumerate(mats):
            one = is_ideal_irreducible([M], certify=False)
            if not one.irreducible:
                rep.notes.append(f"generator {meta['names'][i]} leaves {one.witness.indices} invariant")
    if n <= 16:
        ex = exhaustive_is_irreducible(mats)
        rep.check("scc_matches_exhaustive", ex == res.irreducible, {"exhaustive": ex, "scc": res.irreducible})
    L = p["length"] if p["length"] is not None else max(n, 1)
    cc = crosscheck_characterizations(mats, L)
    st = "inconclusive" if cc.inconclusive else None
    rep.check("characterizations_agree", cc.consistent, {
        "scc": cc.scc, "orbit": cc.orbit, "ball": cc.ball, "length": L, "detail": cc.detail,
    }, status=st)


def _run_pf(mats, meta, p, rep):
    if len(mats) != 1:
        raise InputError(f"pf needs exactly one generator, got {len(mats)}")
    T = mats[0]
    n = T.shape[0]
    s = analyze_single(T, p["length"] if p["length"] is not None else n * n)
    tol = p["tol_spec"]
    rep.results.update({
        "r_T": s.r_T, "r": s.r, "sigma": list(s.sigma), "sigma_per": s.sigma_per,
        "cyclic_basis": s.x.T, "period": s.r_period, "minrank": s.r_minrank,
        "peripheral_multiplicity": s.r_multiplicity,
    })
    try:
        d = classify_dichotomy(T)
        rep.results["dichotomy"] = {"kind": d.kind, "m_j": d.m_j, "errors": d.errors}
    except ReturnHorizonExceeded as exc:
        rep.notes.append(f"dichotomy scan: {exc}")
    full = sorted(s.sigma) == list(range(s.r)) and _perm_order(s.sigma) == s.r
    rep.check("full_cycle", full, {"sigma": list(s.sigma)})
    rep.check("radii_agree", s.radii_agree, {
        "period": s.r_period, "minrank": s.r_minrank, "multiplicity": s.r_multiplicity,
    })
    rep.check("cyclic_action", s.residual <= tol, {"max_relative_residual": s.residual})
    rep.check("disjoint_basis", s.disjoint, {})
    roots = s.r_T * np.exp(2j * np.pi * np.arange(s.r) / s.r)
    got = np.asarray(s.sigma_per)
    dist = max(np.abs(got - z).min() for z in roots) if got.size == s.r else np.inf
    rep.check("peripheral_roots", dist <= tol * s.r_T, {"max_distance": dist, "count": int(got.size)})
    split = peripheral_split(T)
    Pc = combinatorial_projection(T)
    gap = frobenius(split.P - Pc)
    rep.check("projection_routes_agree", gap <= tol, {"frobenius_gap": gap, "route": split.route})
    rep.check("asymptotic_count", len(s.asymptotic) == s.r, {"count": len(s.asymptotic)})


def _perm_order(p):
    from .structure import perm_order

    return perm_order(p)


def _ball(mats, meta, p, default_L):
    L = p["length"] if p["length"] is not None else default_L
    return generate_ball(mats, L, tau_dup=p["tol_dup"], names=meta["names"])


def _semigroup_notes(approx, meta, rep):
    n = approx.n
    if approx.find(np.eye(n)) is None:
        rep.notes.append("identity not in semigroup ball")
    top = [e for e in approx.elements if e.rank == n]
    for gi, G in enumerate(approx.gens):
        powers = []
        M = np.eye(n)
        for _ in range(approx.L):
            M = M @ G
            nrm = frobenius(M)
            if nrm == 0:
                break
            powers.append(M / nrm)
        if top and all(min(frobenius(e.matrix - Q) for Q in powers) <= 1e-8 for e in top if powers):
            rep.notes.append(f"all rank-{n} rays are powers of {meta['names'][gi]}")


def _run_semigroup(mats, meta, p, rep):
    approx = _ball(mats, meta, p, 8)
    rep.results["length"] = approx.L
    rep.results["rays"] = len(approx)
    rep.results["minrank"] = approx.minrank
    rep.results["minimal_rank_rays"] = len(approx.S_r)
    rep.results["letters"] = [l.name for l in approx.letters]
    rep.notes.extend(approx.notes)
    _semigroup_notes(approx, meta, rep)
    rep.results["irreducible"] = is_ideal_irreducible(mats, certify=False).irreducible
    projs = approx.projections
    rep.results["projections"] = len(projs)
    rep.results["projection_labels"] = sorted({pr.label for pr in projs})
    ri = right_ideal_analysis(approx)
    rep.results["right_ideal_conditions"] = ri.conditions
    rep.check("right_ideal_conditions_agree", ri.consistent, ri.conditions)


def _run_pair(mats, meta, p, rep):
    if len(mats) != 2:
        raise InputError(f"pair needs exactly two generators (S, K), got {len(mats)}")
    S, K = mats
    N = p["horizon"] if p["horizon"] is not None else 200
    k = p["samples"] if p["samples"] is not None else 10
    pr = analyze_commuting_pair(S, K, N=N, samples=k, seed=p["seed"])
    tol = p["tol_spec"]
    rep.results.update({
        "lambda": pr.lam, "r_K": pr.rK, "x0": pr.x0, "x0star": pr.x0star,
        "horizon": N, "samples": k,
        "final_ratios": {key: v for key, v in sorted(pr.final_ratios.items())},
    })
    rep.check("eigen_identities", max(pr.residuals.values()) <= tol, pr.residuals)
    rep.check("strict_positivity", pr.strictly_positive, {
        "min_x0": float(pr.x0.min()), "min_x0star": float(pr.x0star.min()),
    })
    for key, name in (("K", "local_radius_K"), ("K*", "local_radius_K_dual")):
        dev = float(np.abs(pr.final_ratios[key] - 1).max())
        rep.check(name, dev <= 0.01, {"max_relative_deviation": dev, "N": N})


def _run_verify(mats, meta, p, rep):
    approx = _ball(mats, meta, p, 6)
    rep.results["length"] = approx.L
    rep.results["rays"] = len(approx)
    rep.results["minrank"] = approx.minrank
    rep.notes.extend(approx.notes)
    diag = same_range_diagnosis(approx)
    rep.results["same_range_diagnosis"] = diag.kind.value
    rep.results["projections"] = len(diag.projections)
    rep.results["max_range_angle"] = diag.evidence["max_range_angle"]
    rep.check("same_range_conditions_agree", diag.evidence["equivalent_conditions_agree"], {
        k: v for k, v in diag.evidence.items() if k != "range_invariant"
    })
    ri = right_ideal_analysis(approx)
    rep.results["right_ideal_conditions"] = ri.conditions
    rep.check("right_ideal_conditions_agree", ri.consistent, ri.conditions)
    if diag.kind is Diagnosis.DISTINCT_RANGES:
        dim = common_eigenspace_dimension([e.matrix for e in approx.elements])
        rep.results["common_eigenspace_dimension"] = dim
        if dim == 0:
            rep.notes.append("no common eigenvector")
        rep.notes.append("minimal projections have distinct ranges: no global permutation structure")
        return
    ps = permutation_structure(approx, diagnosis=diag)
    ce = common_eigenvector(ps, approx)
    bd = block_decomposition(ps, approx)
    rep.results.update({
        "r": ps.r, "basis": ps.x.T, "group": [list(g) for g in ps.G],
        "x0": ce.x0, "blocks": bd.blocks,
    })
    if ce.x0star is not None:
        rep.results["x0star"] = ce.x0star
    else:
        rep.notes.append(ce.dual_refused)
    rep.check("unique_common_eigenvector", ce.fixed_space_dim == 1, {"fixed_space_dim": ce.fixed_space_dim})
    worst = max(ce.residuals)
    rep.check("common_eigenvector", worst <= p["tol_spec"], {"max_relative_residual": worst})
    rep.check("block_pattern", bd.all_match, {"mismatches": [i for i, m in enumerate(bd.matches) if not m][:5]})
    vr = verify_structure_theorems(approx, ps, seed=p["seed"])
    for c in vr.checks:
        status = c.status if c.status in ("pass", "fail") else "info"
        ev = dict(c.evidence)
        if c.status not in ("pass", "fail"):
            ev["outcome"] = c.status
        rep.check(c.name, c.status == "pass", ev, status=status)


_DISPATCH = {
    "irreducible": _run_irreducible,
    "pf": _run_pf,
    "semigroup": _run_semigroup,
    "pair": _run_pair,
    "verify": _run_verify,
}


def _params(args, meta):
    file_p = meta["params"]
    known = {"length", "horizon", "samples", "seed", "tol_dup", "tol_spec"}
    unknown = sorted(set(file_p) - known)
    if unknown:
        raise InputError(f"unknown params in file: {unknown}")

    def pick(name, default):
        v = getattr(args, name, None)
        return v if v is not None else file_p.get(name, default)

    p = {
        "length": pick("length", None),
        "horizon": pick("horizon", None),
        "samples": pick("samples", None),
        "seed": pick("seed", 0),
        "tol_dup": float(pick("tol_dup", TOL_DUP)),
        "tol_spec": float(pick("tol_spec", TOL_SPEC)),
    }
    if p["length"] is not None and not LENGTH_RANGE[0] <= int(p["length"]) <= LENGTH_RANGE[1]:
        raise InputError(f"length must lie in {list(LENGTH_RANGE)}, got {p['length']}")
    if p["horizon"] is not None and not HORIZON_RANGE[0] <= int(p["horizon"]) <= HORIZON_RANGE[1]:
        raise InputError(f"horizon must lie in {list(HORIZON_RANGE)}, got {p['horizon']}")
    if p["samples"] is not None and int(p["samples"]) < 1:
        raise InputError("samples must be >= 1")
    if p["tol_dup"] <= 0 or p["tol_spec"] <= 0:
        raise InputError("tolerances must be positive")
    return p


def run(args, out=None):
    """Execute one parsed request; writes the report and returns the exit status."""
    out = out or sys.stdout
    rep = Report(command=args.command, input=str(args.file))
    try:
        mats, meta = parse_matrix_set(args.file)
        p = _params(args, meta)
        rep.results["generators"] = meta["names"]
        if meta["description"]:
            rep.results["description"] = meta["description"]
        _DISPATCH[args.command](mats, meta, p, rep)
    except (InputError, ReducibleError) as exc:
        rep.status = "error"
        rep.notes.append(f"input error: {exc}")
        if isinstance(exc, ReducibleError) and exc.witness is not None:
            rep.results["witness"] = exc.witness.indices
        print(emit_report(rep, args.format), file=out)
        return EXIT_INPUT
    except (InconclusiveError, ReturnHorizonExceeded, BallExplosion) as exc:
        rep.status = "inconclusive"
        rep.notes.append(f"inconclusive, increase length or horizon: {exc}")
        print(emit_report(rep, args.format), file=out)
        return EXIT_INCONCLUSIVE
    except AnalysisError as exc:
        rep.check("analysis", False, {"error": type(exc).__name__, "message": str(exc)})
    rep.finalize()
    print(emit_report(rep, args.format), file=out)
    if rep.status == "fail":
        return EXIT_FAIL
    if rep.status == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="irrsemigroup",
        description="Structure of ideal-irreducible semigroups of nonnegative matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "irreducible": "decide ideal irreducibility and print a certificate or witness",
        "pf": "cyclic Perron-Frobenius structure of a single irreducible matrix",
        "semigroup": "enumerate the ray ball, minimal rank, projections and right ideals",
        "pair": "common eigenvector and local radii of a commuting pair (S, K)",
        "verify": "full structure battery on the ray ball",
    }
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=helps[cmd])
        sp.add_argument("file", help="JSON generator file")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--tol-dup", dest="tol_dup", type=float, default=None)
        sp.add_argument("--tol-spec", dest="tol_spec", type=float, default=None)
        sp.add_argument("--seed", type=int, default=None)
        if cmd in ("irreducible", "pf", "semigroup", "verify"):
            sp.add_argument("--length", "-L", type=int, default=None, help="maximal word length")
        if cmd == "pair":
            sp.add_argument("--horizon", "-N", type=int, default=None, help="power horizon")
            sp.add_argument("--samples", type=int, default=None, help="random x > 0 per sequence")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
