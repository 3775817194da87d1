"""Batch orchestration: manifest files, subcommands, machine-readable
reports, and a result cache.

A manifest is a UTF-8 JSON file describing one computation:

    {
      "manifold": {"splice": "trefoil"},      # or {"builtin": "t3"},
                                              # {"surgery": "5_2"},
                                              # {"dsl": "< x | ... >"},
                                              # {"dsl_file": "path"}
      "phi": [0, 0, 1],                       # class in the natural basis
      "euler": [0, 0, 1],                     # or {"free": [...], "torsion": [...]}
      "groups": ["Z/2", "Z/3"],               # or {"file": path}, {"table": text}
      "flags": {"graph_manifold": false, "k_zero": false},
      "cone": {"h": [...], "a": [...]},       # for the cone subcommand
      "delta_k": {"0": 1, "1": -1, "2": 1},   # for splice-sw (optional)
      "output": "report.json"                 # optional, else stdout
    }

Natural bases: T^3 uses the duals of its three generators; a splice
uses (a, b, knot meridian class); a 0-surgery uses the meridian class;
inline DSL manifolds use the Smith-normal-form basis of h1 directly
(the report carries the projection matrix for reference).

Exit codes: 0 computed, 1 obstruction FAILS (obstruct only), 2 input
error, 3 indeterminate or timed out.  Reports are byte-stable across
runs and cache states.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import cache as _cache
from .alexander import (
    IndeterminateTwisted,
    alexander_multivariable,
    alexander_one_variable,
)
from .covers import (
    FiniteGroup,
    FiniteHom,
    builtin_group,
    enumerate_epimorphisms,
    load_group_table,
    reidemeister_schreier,
    restricted_divisibility,
)
from .exactalg import IntMatrix, LaurentPoly
from .homology import (
    CohClass1,
    EulerClass,
    Interval,
    RealClass2,
    TorsionEulerClassError,
    circle_bundle_invariants,
    decompose_positive,
    h1,
)
from .obstruction import ModeFlags, QuotientRecord, quotient_record, verdict
from .presentations import (
    ParseError,
    Presentation,
    builtin_knots,
    parse_presentation,
    splice_t3,
    t3_presentation,
    zero_surgery,
)

SCHEMA_VERSION = 1

SUBCOMMANDS = (
    "h1",
    "bundle",
    "alex",
    "talex",
    "covers",
    "sw",
    "splice-sw",
    "obstruct",
    "cone",
)


class ManifestError(ValueError):
    pass


class Timeout(Exception):
    pass


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def ser_poly(p: LaurentPoly) -> dict:
    return {
        "variables": list(p.variables),
        "terms": [[list(e), c] for e, c in p.sorted_terms()],
    }


def deser_poly(doc: dict) -> LaurentPoly:
    return LaurentPoly(
        tuple(doc["variables"]), {tuple(e): c for e, c in doc["terms"]}
    )


def ser_fraction(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


def ser_record(r: QuotientRecord) -> dict:
    if isinstance(r.poly, IndeterminateTwisted):
        poly_doc = {
            "indeterminate": True,
            "delta_j": ser_poly(r.poly.delta_j),
            "delta_0": ser_poly(r.poly.delta_0),
            "block_det": ser_poly(r.poly.block_det),
        }
    else:
        poly_doc = ser_poly(r.poly)
    return {
        "group": r.hom.target.name,
        "group_order": r.hom.target.order,
        "images": list(r.hom.images),
        "poly": poly_doc,
        "monic": r.monic,
        "degree": r.degree,
        "div_phi_g": r.div_phi_g,
        "implied_zeta_phi": ser_fraction(r.implied_zeta_phi),
        "cover_b1": r.cover_b1,
    }


# ---------------------------------------------------------------------------
# manifest handling
# ---------------------------------------------------------------------------


def load_manifest(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ManifestError(f"cannot read manifest: {exc}") from exc
    except ValueError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    return doc


def resolve_manifold(doc: dict) -> tuple[Presentation, str, list]:
    """Returns (presentation, description, natural basis class vectors)."""
    spec = doc.get("manifold")
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ManifestError("manifest needs exactly one manifold source")
    (kind, value), = spec.items()
    knots = builtin_knots()
    if kind == "builtin":
        if value in ("t3", "T3"):
            p = t3_presentation()
        else:
            raise ManifestError(f"unknown builtin manifold {value!r}")
        desc = f"builtin:{value}"
    elif kind == "splice":
        if value not in knots:
            raise ManifestError(f"unknown knot {value!r}")
        p = splice_t3(knots[value])
        desc = f"splice:{value}"
    elif kind == "surgery":
        if value not in knots:
            raise ManifestError(f"unknown knot {value!r}")
        p = zero_surgery(knots[value])
        desc = f"surgery:{value}"
    elif kind == "dsl":
        try:
            p = parse_presentation(value)
        except ParseError as exc:
            raise ManifestError(f"bad presentation: {exc}") from exc
        desc = "dsl"
    elif kind == "dsl_file":
        try:
            text = Path(value).read_text(encoding="utf-8")
        except OSError as exc:
            raise ManifestError(f"cannot read {value!r}: {exc}") from exc
        try:
            p = parse_presentation(text)
        except ParseError as exc:
            raise ManifestError(f"bad presentation: {exc}") from exc
        desc = f"dsl_file:{value}"
    else:
        raise ManifestError(f"unknown manifold source {kind!r}")

    h = h1(p)
    basis = _natural_basis(kind, value, p, h)
    return p, desc, basis


def _natural_basis(kind, value, p: Presentation, h) -> list[tuple[int, ...]]:
    """Class vectors (rows) of the documented natural basis of the free
    part of H_1, in internal SNF coordinates."""
    n = p.num_generators

    def gen_class(i):
        e = [0] * n
        e[i] = 1
        return h.free_class(e)

    if kind == "builtin" and value in ("t3", "T3"):
        return [gen_class(0), gen_class(1), gen_class(2)]
    if kind == "splice":
        mu = builtin_knots()[value].presentation.peripheral[0]
        mu_e = [0] * n
        for g, e in mu.syllables:
            mu_e[g + 2] += e
        return [gen_class(0), gen_class(1), h.free_class(mu_e)]
    if kind == "surgery":
        mu = builtin_knots()[value].presentation.peripheral[0]
        mu_e = [0] * n
        for g, e in mu.syllables:
            mu_e[g] += e
        return [h.free_class(mu_e)]
    # identity basis in SNF coordinates
    return [tuple(1 if i == j else 0 for j in range(h.b)) for i in range(h.b)]


def resolve_phi(doc: dict, h, basis) -> CohClass1:
    raw = doc.get("phi")
    if raw is None:
        raise ManifestError("this subcommand needs a 'phi' entry")
    if not isinstance(raw, list) or not all(isinstance(x, int) for x in raw):
        raise ManifestError("'phi' must be a list of integers")
    if len(raw) != h.b:
        raise ManifestError(f"'phi' must have length b_1 = {h.b}")
    c = IntMatrix(basis, cols=h.b)
    if abs(c.det()) != 1:
        raise ManifestError("natural basis is degenerate; supply phi via dsl")
    from .exactalg import solve_integer

    sol = solve_integer(c, raw)
    if sol is None:
        raise ManifestError("phi does not lie in the dual lattice")
    return CohClass1(sol)


def resolve_euler(doc: dict, h, basis) -> EulerClass:
    raw = doc.get("euler")
    if raw is None:
        raise ManifestError("this subcommand needs an 'euler' entry")
    if isinstance(raw, dict):
        free = raw.get("free", [])
        torsion = raw.get("torsion", [])
    else:
        free, torsion = raw, []
    if not isinstance(free, list) or not all(isinstance(x, int) for x in free):
        raise ManifestError("'euler' free part must be a list of integers")
    if len(free) != h.b:
        raise ManifestError(f"'euler' free part must have length b_1 = {h.b}")
    if len(torsion) != len(h.torsion):
        if torsion:
            raise ManifestError("'euler' torsion part has the wrong length")
        torsion = [0] * len(h.torsion)
    internal = [
        sum(free[i] * basis[i][j] for i in range(len(basis)))
        for j in range(h.b)
    ]
    return EulerClass(internal, torsion, moduli=h.torsion)


def resolve_groups(doc: dict) -> list[FiniteGroup]:
    raw = doc.get("groups")
    if raw is None:
        raise ManifestError("this subcommand needs a 'groups' entry")
    out = []
    for item in raw:
        if isinstance(item, str):
            try:
                out.append(builtin_group(item))
            except KeyError as exc:
                raise ManifestError(str(exc)) from exc
        elif isinstance(item, dict) and "file" in item:
            try:
                text = Path(item["file"]).read_text(encoding="utf-8")
            except OSError as exc:
                raise ManifestError(f"cannot read group table: {exc}") from exc
            out.append(load_group_table(text, name=item.get("name", item["file"])))
        elif isinstance(item, dict) and "table" in item:
            out.append(load_group_table(item["table"], name=item.get("name", "G")))
        else:
            raise ManifestError(f"bad group entry {item!r}")
    return out


def resolve_flags(doc: dict) -> ModeFlags:
    raw = doc.get("flags", {})
    if not isinstance(raw, dict):
        raise ManifestError("'flags' must be an object")
    unknown = set(raw) - {"graph_manifold", "k_zero"}
    if unknown:
        raise ManifestError(f"unknown flags {sorted(unknown)}")
    return ModeFlags(
        graph_manifold=bool(raw.get("graph_manifold", False)),
        k_zero=bool(raw.get("k_zero", False)),
    )


def _parse_coord(x):
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, list) and len(x) == 2:
        return Interval(Fraction(str(x[0])), Fraction(str(x[1])))
    raise ManifestError(f"bad coordinate {x!r}")


# ---------------------------------------------------------------------------
# the per-quotient worker (process-pool friendly)
# ---------------------------------------------------------------------------


def _record_payload(p_text, group_spec, images, phi_values):
    return {
        "op": "quotient_record",
        "schema": SCHEMA_VERSION,
        "presentation": p_text,
        "group": group_spec,
        "images": list(images),
        "phi": list(phi_values),
    }


def _group_from_spec(spec) -> FiniteGroup:
    if isinstance(spec, str):
        return builtin_group(spec)
    return load_group_table(spec["table"], name=spec.get("name", "G"))


def _record_worker(payload) -> dict:
    p = parse_presentation(payload["presentation"])
    g = _group_from_spec(payload["group"])
    hom = FiniteHom(p, g, payload["images"])
    phi = CohClass1(payload["phi"])
    rec = quotient_record(p, hom, phi)
    return ser_record(rec)


def _dump_table(g: FiniteGroup) -> str:
    from .covers import dump_group_table

    return dump_group_table(g)


def compute_records(
    p: Presentation,
    phi: CohClass1,
    groups: list[FiniteGroup],
    group_specs: list,
    jobs: int,
    use_cache: bool,
) -> list[dict]:
    """Serialized quotient records for the trivial quotient and all
    epimorphisms, cached by content and computed in parallel."""
    p_text = p.text()
    tasks = []  # (payload, key)
    trivial_payload = _record_payload(p_text, "trivial", [0] * p.num_generators, phi.values)
    tasks.append(trivial_payload)
    for g, spec in zip(groups, group_specs):
        for a in enumerate_epimorphisms(p, g):
            tasks.append(_record_payload(p_text, spec, a.images, phi.values))

    results: list[dict | None] = [None] * len(tasks)
    pending = []
    for i, payload in enumerate(tasks):
        key = _cache.cache_key(payload)
        hit = _cache.cache_get(key) if use_cache else None
        if hit is not None:
            results[i] = hit
        else:
            pending.append((i, payload, key))

    if pending:
        if jobs > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                docs = list(pool.map(_record_worker, [p for _, p, _ in pending]))
        else:
            docs = [_record_worker(p) for _, p, _ in pending]
        for (i, _payload, key), doc in zip(pending, docs):
            results[i] = doc
            if use_cache:
                _cache.cache_put(key, doc)
    return results  # type: ignore[return-value]


def _record_from_doc(doc: dict, p: Presentation, groups_by_name: dict) -> QuotientRecord:
    """Rehydrate enough of a record for the verdict fold."""
    poly_doc = doc["poly"]
    if poly_doc.get("indeterminate"):
        poly = IndeterminateTwisted(
            deser_poly(poly_doc["delta_j"]),
            deser_poly(poly_doc["delta_0"]),
            deser_poly(poly_doc["block_det"]),
        )
    else:
        poly = deser_poly(poly_doc)
    g = groups_by_name[doc["group"]]
    hom = FiniteHom(p, g, doc["images"])
    implied = doc["implied_zeta_phi"]
    return QuotientRecord(
        hom,
        poly,
        doc["monic"],
        doc["degree"],
        doc["div_phi_g"],
        None if implied is None else Fraction(implied),
        doc["cover_b1"],
    )


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def run(doc: dict, subcommand: str, jobs: int = 1, use_cache: bool = True) -> tuple[dict, int]:
    """Execute one subcommand against a manifest document.

    Returns (report document, exit code).
    """
    p, desc, basis = resolve_manifold(doc)
    h = h1(p)
    report = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": subcommand,
        "manifold": desc,
        "presentation": p.text(),
        "b1": h.b,
        "torsion": list(h.torsion),
    }
    code = 0

    if subcommand == "h1":
        report["projection"] = [list(r) for r in h.projection.entries]

    elif subcommand == "bundle":
        e = resolve_euler(doc, h, basis)
        try:
            inv = circle_bundle_invariants(h, e)
        except TorsionEulerClassError as exc:
            raise ManifestError(str(exc)) from exc
        report["invariants"] = {
            "b1": inv.b1,
            "b2": inv.b2,
            "b2_plus": inv.b2_plus,
            "b2_minus": inv.b2_minus,
            "signature": inv.signature,
        }

    elif subcommand == "alex":
        payload = {"op": "alex", "schema": SCHEMA_VERSION, "presentation": p.text()}
        key = _cache.cache_key(payload)
        hit = _cache.cache_get(key) if use_cache else None
        if hit is None:
            delta = alexander_multivariable(p, h, jobs=jobs)
            hit = ser_poly(delta)
            if use_cache:
                _cache.cache_put(key, hit)
        report["alexander_multivariable"] = hit
        if doc.get("phi") is not None:
            phi = resolve_phi(doc, h, basis)
            report["alexander_one_variable"] = ser_poly(
                alexander_one_variable(p, phi, h, jobs=jobs)
            )

    elif subcommand in ("talex", "obstruct"):
        phi = resolve_phi(doc, h, basis)
        from .homology import divisibility

        if divisibility(phi) != 1:
            raise ManifestError("phi must be primitive for this subcommand")
        groups = resolve_groups(doc)
        names = [g.name for g in groups]
        if len(set(names)) != len(names) or "trivial" in names:
            raise ManifestError("group names must be distinct and not 'trivial'")
        specs = [
            item if isinstance(item, str) else {"table": _dump_table(g), "name": g.name}
            for item, g in zip(doc.get("groups", []), groups)
        ]
        record_docs = compute_records(p, phi, groups, specs, jobs, use_cache)
        report["records"] = record_docs
        if subcommand == "obstruct":
            flags = resolve_flags(doc)
            groups_by_name = {g.name: g for g in groups}
            groups_by_name["trivial"] = builtin_group("trivial")
            records = [_record_from_doc(d, p, groups_by_name) for d in record_docs]
            v = verdict(records, flags)
            report["verdict"] = {
                "status": v.status,
                "reason": v.reason,
                "witness": ser_record(v.witness) if v.witness else None,
                "flags": {
                    "graph_manifold": flags.graph_manifold,
                    "k_zero": flags.k_zero,
                },
            }
            if v.status == "FAILS":
                code = 1
            elif v.status == "INDETERMINATE":
                code = 3

    elif subcommand == "covers":
        groups = resolve_groups(doc)
        phi = resolve_phi(doc, h, basis) if doc.get("phi") is not None else None
        out = []
        for g in groups:
            for a in enumerate_epimorphisms(p, g):
                cover = reidemeister_schreier(p, a)
                hc = h1(cover)
                entry = {
                    "group": g.name,
                    "images": list(a.images),
                    "cover_generators": cover.num_generators,
                    "cover_relators": len(cover.relators),
                    "cover_b1": hc.b,
                    "cover_torsion": list(hc.torsion),
                }
                if phi is not None:
                    entry["div_phi_g"] = restricted_divisibility(p, a, phi, h)
                out.append(entry)
        report["covers"] = out

    elif subcommand == "sw":
        from .swbridge import baldridge_pushforward, coefficient_sum, kzero_sum_test, sw_from_alexander

        delta = alexander_multivariable(p, h, jobs=jobs)
        s = sw_from_alexander(delta, h)
        report["sw"] = {
            "rank": s.rank,
            "support": [[list(w), c] for w, c in s.sorted_support()],
            "coefficient_sum": coefficient_sum(s),
            "k_zero_sum_test": kzero_sum_test(s, h),
        }
        if doc.get("euler") is not None:
            e = resolve_euler(doc, h, basis)
            pushed = baldridge_pushforward(s, e)
            report["sw_pushforward"] = {
                "rank": pushed.rank,
                "support": [[list(w), c] for w, c in pushed.sorted_support()],
                "coefficient_sum": coefficient_sum(pushed),
            }

    elif subcommand == "splice-sw":
        from .swbridge import coefficient_sum, splice_sw

        spec = doc.get("manifold", {})
        delta_doc = doc.get("delta_k")
        if delta_doc is not None:
            if isinstance(delta_doc, dict):
                delta_k = LaurentPoly.univariate({int(k): v for k, v in delta_doc.items()})
            else:
                delta_k = LaurentPoly.univariate(list(delta_doc))
        elif "splice" in spec:
            delta_k = builtin_knots()[spec["splice"]].alexander_polynomial
        else:
            raise ManifestError("splice-sw needs 'delta_k' or a splice manifold")
        e = resolve_euler(doc, h, basis)
        try:
            s = splice_sw(delta_k, e)
        except ValueError as exc:
            raise ManifestError(str(exc)) from exc
        report["splice_sw"] = {
            "rank": s.rank,
            "support": [[list(w), c] for w, c in s.sorted_support()],
            "coefficient_sum": coefficient_sum(s),
        }

    elif subcommand == "cone":
        cone = doc.get("cone")
        if not isinstance(cone, dict) or "h" not in cone or "a" not in cone:
            raise ManifestError("cone needs {'h': [...], 'a': [...]}")
        coords = [_parse_coord(x) for x in cone["h"]]
        avec = [Fraction(str(x)) for x in cone["a"]]
        basis_arg = cone.get("basis")
        try:
            terms = decompose_positive(RealClass2(coords), avec, basis_arg)
        except ValueError as exc:
            raise ManifestError(str(exc)) from exc
        report["cone"] = [
            {"coefficient": str(c), "class": list(v)} for c, v in terms
        ]

    else:  # pragma: no cover - argparse restricts choices
        raise ManifestError(f"unknown subcommand {subcommand!r}")

    return report, code


def render_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"


def _alarm_handler(signum, frame):  # pragma: no cover - timing dependent
    raise Timeout()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="swalex",
        description="Exact twisted-Alexander / Seiberg-Witten obstruction "
        "computations for circle bundles over 3-manifolds.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("manifest", help="path to a JSON manifest")
    parser.add_argument("--no-cache", action="store_true", help="bypass the result cache")
    parser.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for minor/quotient enumeration")
    parser.add_argument("--timeout", type=int, default=0, metavar="SECONDS",
                        help="abort the computation after this many seconds")
    parser.add_argument("--output", help="override the manifest's output path")
    args = parser.parse_args(argv)

    try:
        doc = load_manifest(args.manifest)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    old_handler = None
    if args.timeout > 0:
        old_handler = signal.signal(signal.SIGALRM, _alarm_handler)
        signal.alarm(args.timeout)
    try:
        report, code = run(doc, args.subcommand, jobs=max(1, args.jobs),
                           use_cache=not args.no_cache)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Timeout:
        print("error: computation timed out", file=sys.stderr)
        return 3
    finally:
        if args.timeout > 0:
            signal.alarm(0)
            signal.signal(signal.SIGALRM, old_handler)

    text = render_report(report)
    out_path = args.output or doc.get("output")
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
