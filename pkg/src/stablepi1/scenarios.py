"""The bundled catalogue: machine-readable scenario files and their runner.

Scenario files are line-oriented UTF-8 with ``#`` comments and four kinds of
section:

    meta                         key/value pairs (id, kind, flags, counts)
    expected                     order <n> / cyclic yes|no
    complex <name>               basepoint / vertex / edge / cell lines
    map                          vertex a b / edge lab [-]lab lines
    torus                        mode plus scalars, ``matrix NAME R C`` blocks
                                 (R following lines of C integers each) and
                                 ``vector NAME ints...`` lines

Conventions for torus data: translations of group generators are integers
over the declared ``denominator``; cover lattices, deck transformations and
curve-class rows are written in the scaled coordinates (ambient coordinates
multiplied by the denominator), which keeps every matrix integral.

Each scenario carries the expected fundamental-group invariants; running it
recomputes them from the payload and reports pass or fail.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

from . import fpgroup, torus, vankampen
from .intlin import (
    IntMatrix,
    RatVector,
    cokernel_invariants,
    hermite_normal_form,
    solve_integral,
)
from .fpgroup import DEFAULT_MAX_COSETS


class ParseError(ValueError):
    """Syntax error in a scenario file (message carries the line number)."""


class ValidationError(ValueError):
    """Scenario data violates a structural invariant."""


KINDS = ("vankampen", "torus-lattice", "parametric", "constant")


@dataclass(frozen=True)
class VanKampenPayload:
    dbar: vankampen.GluingComplex
    d: vankampen.GluingComplex
    gluing: vankampen.GluingMap


@dataclass(frozen=True)
class BiTriPayload:
    params: torus.BiTriEllipticParams


@dataclass(frozen=True)
class ReduciblePayload:
    endo_q: IntMatrix
    endo_pi: IntMatrix


@dataclass(frozen=True)
class CoverPayload:
    """A bi-elliptic quotient verified through an explicit intermediate cover."""

    rank: int
    denominator: int
    group_gens: tuple
    group_order: int
    deck: torus.AffineTorusMap
    deck_order: int
    cover_lattice: IntMatrix
    classes: tuple  # (name, IntMatrix of generator rows in scaled coords)
    crossing: IntMatrix
    crossing_count: int
    nodes_downstairs: int


@dataclass(frozen=True)
class IsogenyPayload:
    matrix: IntMatrix


@dataclass(frozen=True)
class ConstantPayload:
    pass


@dataclass(frozen=True)
class Scenario:
    id: str
    kind: str
    payload: object
    expected_order: int
    expected_cyclic: bool
    meta: dict = field(repr=False)


@dataclass(frozen=True)
class Report:
    scenario: str
    order: "int | None"
    cyclic: "bool | None"
    abelianization: object
    presentation: str
    expected_order: int
    expected_cyclic: bool
    verdict: str
    elapsed_ms: float
    checks: tuple = ()
    error: "str | None" = None

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        inv = self.abelianization
        return {
            "scenario": self.scenario,
            "order": self.order,
            "cyclic": self.cyclic,
            "abelianization": None
            if inv is None
            else {"free_rank": inv.free_rank, "torsion": list(inv.torsion)},
            "expected": {"order": self.expected_order, "cyclic": self.expected_cyclic},
            "verdict": self.verdict,
            "elapsed_ms": self.elapsed_ms,
            "presentation": self.presentation,
            "checks": list(self.checks),
            "error": self.error,
        }


# -- parsing -------------------------------------------------------------


def _parse_lines(path):
    out = []
    raw = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, line in enumerate(raw, start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line.split()))
    return out


class _ComplexBuilder:
    def __init__(self):
        self.vertices = []
        self.edges = []
        self.cells = []
        self.basepoint = None


def _signed_token(tok):
    if tok.startswith("-"):
        return tok[1:], -1
    return tok, 1


def load_scenario(path) -> Scenario:
    """Parse and fully validate one scenario file."""
    lines = _parse_lines(path)
    meta = {}
    expected = {}
    complexes = {}
    vmap = {}
    emap = {}
    have_map = False
    tdata = {"matrices": {}, "vectors": {}, "scalars": {}}
    section = None
    current_complex = None
    pending = None  # (name, cols, rows_left, rows)

    def fail(lineno, msg):
        raise ParseError(f"{path}:{lineno}: {msg}")

    for lineno, toks in lines:
        if pending is not None:
            name, cols, left, rows = pending
            try:
                row = [int(t) for t in toks]
            except ValueError:
                fail(lineno, f"expected an integer row of matrix {name}")
            if len(row) != cols:
                fail(lineno, f"matrix {name} row needs {cols} entries")
            rows.append(row)
            left -= 1
            pending = (name, cols, left, rows) if left else None
            if pending is None:
                tdata["matrices"][name] = IntMatrix.from_rows(rows, cols=cols)
            continue
        key = toks[0]
        if key == "meta":
            section = "meta"
            continue
        if key == "expected":
            section = "expected"
            continue
        if key == "complex":
            if len(toks) != 2:
                fail(lineno, "complex needs a name")
            section = "complex"
            current_complex = _ComplexBuilder()
            complexes[toks[1]] = current_complex
            continue
        if key == "map":
            section = "map"
            have_map = True
            continue
        if key == "torus":
            section = "torus"
            continue
        if section == "meta":
            if len(toks) < 2:
                fail(lineno, "meta lines are 'key value...'")
            meta[key] = " ".join(toks[1:])
        elif section == "expected":
            if key == "order" and len(toks) == 2 and toks[1].isdigit():
                expected["order"] = int(toks[1])
            elif key == "cyclic" and len(toks) == 2 and toks[1] in ("yes", "no"):
                expected["cyclic"] = toks[1] == "yes"
            else:
                fail(lineno, "expected lines are 'order <n>' or 'cyclic yes|no'")
        elif section == "complex":
            b = current_complex
            if key == "vertex" and len(toks) == 2:
                b.vertices.append(toks[1])
            elif key == "basepoint" and len(toks) == 2:
                b.basepoint = toks[1]
            elif key == "edge" and len(toks) == 4:
                b.edges.append((toks[1], toks[2], toks[3]))
            elif key == "cell" and len(toks) >= 2:
                b.cells.append(tuple(_signed_token(t) for t in toks[1:]))
            else:
                fail(lineno, f"bad complex line '{' '.join(toks)}'")
        elif section == "map":
            if key == "vertex" and len(toks) == 3:
                vmap[toks[1]] = toks[2]
            elif key == "edge" and len(toks) == 3:
                emap[toks[1]] = _signed_token(toks[2])
            else:
                fail(lineno, f"bad map line '{' '.join(toks)}'")
        elif section == "torus":
            if key == "matrix":
                if len(toks) != 4 or not toks[2].isdigit() or not toks[3].isdigit():
                    fail(lineno, "matrix lines are 'matrix NAME ROWS COLS'")
                nrows, ncols = int(toks[2]), int(toks[3])
                if nrows == 0:
                    tdata["matrices"][toks[1]] = IntMatrix.zeros(0, ncols)
                else:
                    pending = (toks[1], ncols, nrows, [])
            elif key == "vector":
                try:
                    tdata["vectors"][toks[1]] = [int(t) for t in toks[2:]]
                except ValueError:
                    fail(lineno, "vector entries must be integers")
            else:
                tdata["scalars"][key] = " ".join(toks[1:])
        else:
            fail(lineno, f"line outside any section: '{' '.join(toks)}'")

    if pending is not None:
        raise ParseError(f"{path}: matrix {pending[0]} is missing rows")
    if "id" not in meta or "kind" not in meta:
        raise ValidationError(f"{path}: meta must declare id and kind")
    kind = meta["kind"]
    if kind not in KINDS:
        raise ValidationError(f"{path}: unknown kind '{kind}'")
    if "order" not in expected or "cyclic" not in expected:
        raise ValidationError(f"{path}: expected order and cyclic are required")
    if not 1 <= expected["order"] <= 5:
        raise ValidationError(f"{path}: expected order must be in 1..5")

    payload = _build_payload(path, kind, meta, complexes, vmap, emap, have_map, tdata)
    return Scenario(
        id=meta["id"],
        kind=kind,
        payload=payload,
        expected_order=expected["order"],
        expected_cyclic=expected["cyclic"],
        meta=meta,
    )


def _build_complex(path, name, builder):
    if builder.basepoint is None:
        raise ValidationError(f"{path}: complex {name} needs a basepoint")
    try:
        return vankampen.GluingComplex(
            tuple(builder.vertices),
            tuple(builder.edges),
            tuple(builder.cells),
            builder.basepoint,
        )
    except ValueError as exc:
        raise ValidationError(f"{path}: complex {name}: {exc}") from exc


def _build_payload(path, kind, meta, complexes, vmap, emap, have_map, tdata):
    if kind == "vankampen":
        if set(complexes) != {"dbar", "d"} or not have_map:
            raise ValidationError(f"{path}: vankampen needs complexes dbar, d and a map")
        dbar = _build_complex(path, "dbar", complexes["dbar"])
        d = _build_complex(path, "d", complexes["d"])
        gluing = vankampen.GluingMap(dict(vmap), dict(emap))
        try:
            vankampen.check_map(gluing, dbar, d)
        except vankampen.IncompatibleMap as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        _check_node_counts(path, meta, dbar)
        return VanKampenPayload(dbar, d, gluing)

    if kind == "constant":
        return ConstantPayload()

    scalars = tdata["scalars"]
    matrices = tdata["matrices"]
    vectors = tdata["vectors"]
    mode = scalars.get("mode")

    if kind == "parametric":
        if mode != "isogeny" or "isogeny" not in matrices:
            raise ValidationError(f"{path}: parametric scenarios carry an isogeny matrix")
        return IsogenyPayload(matrices["isogeny"])

    # torus-lattice
    if mode == "bitri":
        try:
            params = torus.BiTriEllipticParams(
                d=int(scalars["degphi"]),
                d_prime=int(scalars["degphiprime"]),
                case=scalars["case"],
                glue={"G1": 0, "G2": 1}.get(scalars.get("glue")),
            )
        except (KeyError, ValueError, torus.InvalidParams) as exc:
            raise ValidationError(f"{path}: bad bi-tri-elliptic parameters: {exc}") from exc
        if "twist" in meta and torus.twisting_number(params) != int(meta["twist"]):
            raise ValidationError(f"{path}: declared twist does not match the parameters")
        return BiTriPayload(params)
    if mode == "reducible":
        try:
            return ReduciblePayload(matrices["endo_q"], matrices["endo_pi"])
        except KeyError as exc:
            raise ValidationError(f"{path}: reducible scenarios need endo_q and endo_pi") from exc
    if mode == "cover":
        try:
            rank = int(scalars["rank"])
            den = int(scalars["denominator"])
            gens = []
            i = 1
            while f"gen{i}.linear" in matrices:
                gens.append(
                    torus.AffineTorusMap(
                        matrices[f"gen{i}.linear"],
                        RatVector(tuple(vectors[f"gen{i}.translation"]), den),
                    )
                )
                i += 1
            if not gens:
                raise ValidationError(f"{path}: cover scenarios need group generators")
            deck = torus.conjugate_into_lattice(
                matrices["deck.linear"],
                RatVector.integers(vectors["deck.translation"]),
                matrices["cover_lattice"],
            )
            classes = tuple(
                (name.split(".", 1)[1], matrices[name])
                for name in sorted(matrices)
                if name.startswith("class.")
            )
            return CoverPayload(
                rank=rank,
                denominator=den,
                group_gens=tuple(gens),
                group_order=int(scalars["group_order"]),
                deck=deck,
                deck_order=int(scalars["deck_order"]),
                cover_lattice=matrices["cover_lattice"],
                classes=classes,
                crossing=matrices["crossing"],
                crossing_count=int(scalars["crossing_count"]),
                nodes_downstairs=int(scalars["nodes_downstairs"]),
            )
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"{path}: incomplete cover data: {exc}") from exc
    raise ValidationError(f"{path}: torus section needs a valid mode")


def _check_node_counts(path, meta, dbar):
    """Declared singularity bookkeeping must satisfy the double-locus count:
    nodes = ramification/2 + 2*cusps + 2, and match the skeleton."""
    if not all(k in meta for k in ("nodes", "ramification", "cusps")):
        return
    try:
        nodes = int(meta["nodes"])
        ram = int(meta["ramification"])
        cusps = int(meta["cusps"])
    except ValueError as exc:
        raise ValidationError(f"{path}: node/cusp counts must be integers") from exc
    if ram % 2 or nodes != ram // 2 + 2 * cusps + 2:
        raise ValidationError(f"{path}: node/cusp counts violate the double-locus relation")
    if nodes != len(dbar.vertices):
        raise ValidationError(f"{path}: declared nodes do not match the 1-skeleton")


# -- running -------------------------------------------------------------


def _certify(pres, max_cosets, checks):
    inv = fpgroup.abelianization(pres)
    order = fpgroup.todd_coxeter_order(pres, max_cosets)
    cyclic = fpgroup.is_cyclic_of_order(pres, order, max_cosets)
    checks.append(f"coset enumeration closed at order {order}")
    checks.append(f"abelianization {inv}")
    return order, cyclic, inv


def _run_vankampen(payload, max_cosets, checks):
    src = vankampen.pi1_presentation(payload.dbar)
    tgt = vankampen.pi1_presentation(payload.d)
    rank = len(payload.dbar.edges) - len(payload.dbar.vertices) + 1
    if src.graph_rank != rank:
        raise ValidationError("spanning-tree rank disagrees with Euler count")
    checks.append(f"double-curve skeleton has graph rank {rank}")
    hom = vankampen.induced_hom(payload.gluing, src, tgt)
    trivial = fpgroup.trivial_presentation()
    to_trivial = fpgroup.GroupHom(src.presentation, trivial, ((),) * src.presentation.ngens)
    glued = vankampen.glue_fundamental_group(trivial, to_trivial, hom)
    checks.append("glued over a simply connected normalisation")
    return glued


def _run_bitri(payload, checks):
    m = torus.twisting_number(payload.params)
    checks.append(f"twisting number {m}")
    if payload.params.case == "even":
        count = len(torus.enumerate_glue_subgroups(payload.params))
        if count != 4:
            raise ValidationError(f"expected 4 glue subgroups, found {count}")
        checks.append("4 admissible glue subgroups, 2 after normalisation")
    theta = torus.theta_fbar_intersection(payload.params)
    if theta != 3:
        raise ValidationError(f"polarisation product {theta} != 3")
    checks.append("polarisation meets the glued curve in 3 points")
    return torus.eplus_presentation(payload.params)


def _run_reducible(payload, checks):
    # Two abelian surfaces-worth of homology glued over the two-component
    # curve: the section side identifies the targets, the bisection side
    # compares the degree-2 endomorphism with the identification.
    za = fpgroup.Presentation(("x1", "x2"), ((1, 2, -1, -2),))
    zb = fpgroup.Presentation(("y1", "y2"), ((1, 2, -1, -2),))
    pc = fpgroup.Presentation(
        ("c1", "c2", "c3", "c4"), ((1, 2, -1, -2), (3, 4, -3, -4))
    )
    q, p = payload.endo_q, payload.endo_pi
    if q.rows != 2 or q.cols != 2 or p.rows != 2 or p.cols != 2:
        raise ValidationError("reducible payload needs 2x2 matrices")

    def column_word(mat, j):
        return fpgroup.power_word(1, mat.at(0, j)) + fpgroup.power_word(2, mat.at(1, j))

    f = fpgroup.GroupHom(pc, za, ((1,), (2,), column_word(q, 0), column_word(q, 1)))
    g = fpgroup.GroupHom(pc, zb, ((1,), (2,), column_word(p, 0), column_word(p, 1)))
    checks.append(f"bisection endomorphism degree {abs(q.det())}")
    return fpgroup.amalgamated_product(za, zb, pc, f, g)


def _run_cover(payload, checks):
    elements = torus.generated_group(payload.group_gens)
    if len(elements) != payload.group_order:
        raise ValidationError(
            f"group closure has order {len(elements)}, expected {payload.group_order}"
        )
    if not torus.is_free_action(payload.group_gens):
        raise ValidationError("bi-elliptic group action is not free")
    checks.append(f"free action of a group of order {payload.group_order}")

    if torus.map_order(payload.deck, cap=64) != payload.deck_order:
        raise ValidationError("deck transformation has the wrong order")
    if not torus.is_free_action([payload.deck]):
        raise ValidationError("deck transformation is not free")
    checks.append(f"deck transformation of order {payload.deck_order} acts freely")

    count = torus.preimage_count(
        payload.crossing, RatVector.zero(payload.crossing.rows)
    )
    if count != payload.crossing_count:
        raise ValidationError(f"crossing count {count} != {payload.crossing_count}")
    checks.append(f"curve translates cross in {count} points")

    basis = hermite_normal_form(payload.cover_lattice)
    if basis.rows != payload.rank:
        raise ValidationError("cover lattice must have full rank")
    all_rows = []
    class_lattices = []
    for name, mat in payload.classes:
        rows = []
        for i in range(mat.rows):
            coords = solve_integral(basis, list(mat.row(i)))
            if coords is None:
                raise ValidationError(f"class {name} not contained in the cover lattice")
            rows.append(coords)
        all_rows.extend(rows)
        class_lattices.append(torus.subtorus_class(rows))
    nodes = 0
    for i in range(len(class_lattices)):
        for j in range(i + 1, len(class_lattices)):
            nodes += torus.intersection_number(class_lattices[i], class_lattices[j])
    if nodes != payload.deck_order * payload.nodes_downstairs:
        raise ValidationError(
            f"node count {nodes} != deck order x downstairs nodes"
        )
    checks.append(f"pulled-back double curve carries {nodes} nodes")

    inv = cokernel_invariants(IntMatrix.from_rows(all_rows, cols=payload.rank), payload.rank)
    if not inv.is_trivial:
        raise ValidationError(f"contracted classes leave {inv} of the cover homology")
    checks.append("contracted curve classes generate the cover homology")
    return fpgroup.cyclic_presentation(payload.deck_order)


def _run_isogeny(payload, checks):
    inv = torus.isogeny_cokernel(payload.matrix)
    order = inv.order()
    if not inv.is_cyclic:
        raise ValidationError(f"isogeny cokernel {inv} is not cyclic")
    if not 3 <= order <= 5:
        raise ValidationError(f"isogeny degree {order} outside 3..5")
    checks.append(f"isogeny cokernel is cyclic of order {order}")
    return fpgroup.cyclic_presentation(order)


def run_scenario(s: Scenario, max_cosets=DEFAULT_MAX_COSETS) -> Report:
    """Compute the scenario's fundamental-group invariants and compare."""
    start = time.perf_counter()
    checks = []
    try:
        if s.kind == "vankampen":
            pres = _run_vankampen(s.payload, max_cosets, checks)
        elif s.kind == "constant":
            pres = fpgroup.trivial_presentation()
            checks.append("rigid gluing: simply connected by construction")
        elif s.kind == "parametric":
            pres = _run_isogeny(s.payload, checks)
        elif isinstance(s.payload, BiTriPayload):
            pres = _run_bitri(s.payload, checks)
        elif isinstance(s.payload, ReduciblePayload):
            pres = _run_reducible(s.payload, checks)
        elif isinstance(s.payload, CoverPayload):
            pres = _run_cover(s.payload, checks)
        else:
            raise ValidationError(f"no runner for kind {s.kind}")
        order, cyclic, inv = _certify(pres, max_cosets, checks)
        elapsed = (time.perf_counter() - start) * 1000.0
        verdict = (
            "pass"
            if order == s.expected_order and cyclic == s.expected_cyclic
            else "fail"
        )
        return Report(
            scenario=s.id,
            order=order,
            cyclic=cyclic,
            abelianization=inv,
            presentation=pres.describe(),
            expected_order=s.expected_order,
            expected_cyclic=s.expected_cyclic,
            verdict=verdict,
            elapsed_ms=round(elapsed, 3),
            checks=tuple(checks),
        )
    except Exception as exc:  # computational failures become failed reports
        elapsed = (time.perf_counter() - start) * 1000.0
        return Report(
            scenario=s.id,
            order=None,
            cyclic=None,
            abelianization=None,
            presentation="",
            expected_order=s.expected_order,
            expected_cyclic=s.expected_cyclic,
            verdict="fail",
            elapsed_ms=round(elapsed, 3),
            checks=tuple(checks),
            error=f"{type(exc).__name__}: {exc}",
        )


def bundled_catalogue_dir() -> Path:
    return Path(__file__).resolve().parent / "catalogue"


def _scenario_sort_key(report_or_id):
    sid = report_or_id if isinstance(report_or_id, str) else report_or_id.scenario
    return sid


def verify_catalogue(directory=None, max_cosets=DEFAULT_MAX_COSETS):
    """Run every scenario file in the directory; returns (reports, summary).

    Individual parse or validation failures are captured as failed reports;
    they never abort the rest of the catalogue.
    """
    directory = Path(directory) if directory is not None else bundled_catalogue_dir()
    reports = []
    for path in sorted(directory.glob("*.scn")):
        try:
            scenario = load_scenario(path)
        except (ParseError, ValidationError) as exc:
            reports.append(
                Report(
                    scenario=path.stem,
                    order=None,
                    cyclic=None,
                    abelianization=None,
                    presentation="",
                    expected_order=0,
                    expected_cyclic=False,
                    verdict="fail",
                    elapsed_ms=0.0,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
            continue
        reports.append(run_scenario(scenario, max_cosets))
    reports.sort(key=_scenario_sort_key)
    passed = sum(1 for r in reports if r.passed)
    summary = {"total": len(reports), "passed": passed, "all_pass": passed == len(reports)}
    return reports, summary


def load_catalogue(directory=None):
    """All bundled scenarios, sorted by id.  Raises on malformed files."""
    directory = Path(directory) if directory is not None else bundled_catalogue_dir()
    scenarios = [load_scenario(p) for p in sorted(directory.glob("*.scn"))]
    scenarios.sort(key=lambda s: s.id)
    return scenarios
