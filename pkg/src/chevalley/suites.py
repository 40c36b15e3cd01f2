"""Named verification suites.

Every suite takes a structure table, a seeded ``random.Random`` and a sample
count, and returns a ``Report``.  Randomised suites draw all their inputs
from the generator they are given, so a seed reproduces a run exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import autos, curves, group
from .algebra import LieElement, StructureTable, apply, bracket, verify_antisymmetry, verify_jacobi
from .errors import ChevalleyError
from .group import GroupElement, exp_generator, h_element
from .report import Report
from .rings import QQ, Product
from .roots import dynkin_symmetries, root_label

SMALL = (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 3), 3)


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    run: Callable[[StructureTable, random.Random, int | None], Report]
    min_rank: int = 2


def _random_unipotent(rng: random.Random, table: StructureTable) -> GroupElement:
    g = autos.random_group_word(rng, table, rng.randint(1, 4))
    x = exp_generator(table, rng.choice(table.rs.roots), Fraction(rng.choice(SMALL)))
    return g @ x @ g.inverse()


def _random_torus_element(rng: random.Random, table: StructureTable) -> GroupElement:
    g = GroupElement.identity(table)
    for _ in range(rng.randint(1, 2)):
        s = Fraction(rng.choice((2, 3, -2, Fraction(1, 2), Fraction(-1, 3))))
        g = g @ h_element(table, rng.choice(table.rs.simple), s)
    return g if not g.is_identity() else h_element(table, table.rs.simple[0], 2)


def run_jacobi(table, rng, samples=None) -> Report:
    return verify_jacobi(table)


def run_antisymmetry(table, rng, samples=None) -> Report:
    return verify_antisymmetry(table)


def run_steinberg(table, rng, samples=None) -> Report:
    return group.verify_steinberg(table)


def run_unipotence(table, rng, samples=None) -> Report:
    n = 50 if samples is None else samples
    uni = [_random_unipotent(rng, table) for _ in range(n)]
    tori = [_random_torus_element(rng, table) for _ in range(max(1, (2 * n) // 5))]
    rep = Report("unipotence", meta={"system": table.rs.name})
    rep.add_section(group.verify_unipotence(table, uni, tori))
    rep.add_section(group.verify_power_polynomial(table, uni))
    return rep.finish()


def _random_generator_curve(rng: random.Random, table: StructureTable) -> curves.Curve:
    r = Fraction(rng.choice(SMALL))
    c = curves.curve_from_word(table, [(rng.choice(table.rs.roots), [0, r])])
    g = autos.random_group_word(rng, table, rng.randint(1, 3))
    return curves.conjugate_curve(g, c)


def run_formula1(table, rng, samples=None) -> Report:
    n = 100 if samples is None else samples
    gens = curves.simple_generator_curves(table)
    rep = Report("formula1", meta={"system": table.rs.name})
    rep.add_section(curves.verify_formula1([(a, b) for a in gens for b in gens], "formula1-generators"))
    pairs = [(_random_generator_curve(rng, table), _random_generator_curve(rng, table)) for _ in range(n)]
    rep.add_section(curves.verify_formula1(pairs, "formula1-conjugated"))
    return rep.finish()


def run_prop6(table, rng, samples=None) -> Report:
    return curves.prop6_identities(table)


def run_retraction(table, rng, samples=None) -> Report:
    n = 100 if samples is None else samples
    data = []
    for _ in range(n):
        c = curves.random_curve(rng, table, rng.randint(1, 3), based=rng.random() < 0.5)
        data.append((c, Fraction(rng.choice(SMALL + (0,))), Fraction(rng.choice(SMALL + (0,)))))
    rep = curves.retraction_laws(data)
    rep.meta["system"] = table.rs.name
    return rep


def run_decompose(table, rng, samples=None) -> Report:
    n = 100 if samples is None else samples
    rep = Report("decompose-roundtrip", meta={"system": table.rs.name})
    single = Report("decompose-Q")
    for k in range(n):
        delta, c, w, f = autos.random_monomial(rng, table)
        inp = {"sample": k, "delta": [i + 1 for i in delta], "torus": [str(v) for v in c],
               "weyl": [i + 1 for i in w]}
        try:
            dec = autos.decompose_monomial(f)
        except ChevalleyError as exc:
            single.record(False, "decompose", inp, f"{type(exc).__name__}: {exc}")
            continue
        single.record(dec.recompose(table) == f, "recompose", inp)
        single.record(dec.delta == tuple(delta), "diagram-factor", inp)
    rep.add_section(single.finish())
    blocks = Report("decompose-blockwise")
    nb = max(1, n // 2)
    for k in range(nb):
        d = 2 + k % 2
        parts = [autos.random_monomial(rng, table, 3) for _ in range(d)]
        f = autos.blockwise(table, [p[3] for p in parts])
        inp = {"sample": k, "d": d, "deltas": [[i + 1 for i in p[0]] for p in parts]}
        try:
            decs = autos.decompose_blockwise(f)
        except ChevalleyError as exc:
            blocks.record(False, "decompose", inp, f"{type(exc).__name__}: {exc}")
            continue
        blocks.record(autos.recompose_blockwise(table, decs) == f, "recompose", inp)
        blocks.record([dec.delta for dec in decs] == [tuple(p[0]) for p in parts], "diagram-factor", inp)
    rep.add_section(blocks.finish())
    return rep.finish()


def run_semilinear(table, rng, samples=None) -> Report:
    n = 50 if samples is None else samples
    rep = Report("semilinear", meta={"system": table.rs.name})
    made = []
    for k in range(n):
        d = 2 + k % 2
        sigma, f = autos.random_semilinear(rng, table, d)
        made.append((d, sigma, f))
        inp = {"sample": k, "d": d, "sigma": [s + 1 for s in sigma]}
        try:
            g = autos.extract_ring_automorphism(table, f.full_qmatrix())
        except ChevalleyError as exc:
            rep.record(False, "extract", inp, f"{type(exc).__name__}: {exc}")
            continue
        rep.record(g.sigma == sigma, "sigma", inp)
        lin = autos.SemilinearAut(table, g.linear)
        again = autos.SemilinearAut.coordinate_permutation(table, f.ring, g.sigma) @ lin
        rep.record(again.full_qmatrix() == f.full_qmatrix(), "reassembly", inp)
        rep.record(f.check_semilinear() and f.is_automorphism(), "semilinear-automorphism", inp)
    # samples alternate between d = 2 and d = 3, so compose those two apart
    for k in range(len(made) - 2):
        (d1, s1, f1), (d2, s2, f2) = made[k], made[k + 2]
        if d1 != d2:
            continue
        comp = autos.extract_ring_automorphism(table, (f1 @ f2).full_qmatrix())
        rep.record(comp.sigma == tuple(s1[i] for i in s2), "functorial", {"pair": [k, k + 2]})
    return rep.finish()


def constructed_automorphisms(table: StructureTable, rng: random.Random) -> list[tuple[str, autos.SemilinearAut]]:
    """Nontrivial inner / torus / diagram / weyl samples, labelled."""
    out = []
    rs = table.rs
    for a in rs.simple + [rs.highest_root]:
        out.append((f"inner(x[{root_label(a)}](1/2))", autos.inner(exp_generator(table, a, Fraction(1, 2)))))
    g = autos.random_group_word(rng, table, 3)
    while g.is_identity():
        g = autos.random_group_word(rng, table, 3)
    out.append(("inner(random word)", autos.inner(g)))
    out.append(("torus(2,..)", autos.torus(table, [2] + [1] * (table.rank - 1))))
    out.append(("torus(random)", autos.torus(table, [Fraction(rng.choice((2, -1, Fraction(1, 3), 3)))
                                                    for _ in range(table.rank)])))
    for delta in dynkin_symmetries(rs):
        if list(delta) != list(range(table.rank)):
            out.append((f"diagram({[i + 1 for i in delta]})", autos.diagram(table, delta)))
    for i in range(table.rank):
        out.append((f"weyl([a{i + 1}])", autos.weyl(table, (i,))))
    out.append(("weyl(random)", autos.weyl(table, tuple(rng.randrange(table.rank) for _ in range(3)))))
    return out


def _random_lie(rng: random.Random, table: StructureTable, density: float = 0.4) -> LieElement:
    vals = [Fraction(rng.choice(SMALL)) if rng.random() < density else 0 for _ in range(table.dim)]
    if not any(vals):
        vals[rng.randrange(table.dim)] = Fraction(1)
    return table.element(QQ, vals)


def run_differential(table, rng, samples=None) -> Report:
    n = 100 if samples is None else samples
    rep = Report("differential", meta={"system": table.rs.name})
    fs = constructed_automorphisms(table, rng) + [("identity", autos.SemilinearAut.identity(table))]
    for label, f in fs:
        rep.record(autos.differential_of_standard(f) == f.linear, "equals-linear-part", {"f": label})
    for k in range(n):
        label, f = fs[k % len(fs)]
        x, y = _random_lie(rng, table), _random_lie(rng, table)
        g = autos.random_group_word(rng, table, rng.randint(1, 3))
        inp = {"sample": k, "f": label, "g": g.word_to_json(), "X": x.to_json(), "Y": y.to_json()}
        dx, dy = autos.d_phi(f, x), autos.d_phi(f, y)
        rep.record(autos.d_phi(f, x + y) == dx + dy, "additive", inp)
        rep.record(autos.d_phi(f, bracket(x, y)) == bracket(dx, dy), "bracket", inp)
        gx = apply(g.matrix, x)
        phig = autos.standardness_map(f, g)
        rep.record(autos.d_phi(f, gx) == apply(phig.matrix, dx), "equivariant", inp)
    return rep.finish()


def run_centralizer(table, rng, samples=None) -> Report:
    rep = Report("centralizer", meta={"system": table.rs.name})
    witnesses = {}
    for label, f in constructed_automorphisms(table, rng):
        probe = autos.centralizer_probe(f)
        witnesses[label] = probe.meta["witness"]
        rep.record(not probe.ok and probe.meta["witness"] != "commutes with all", "nontrivial-has-witness",
                   {"f": label})
    for d in (1, 2):
        ring = QQ if d == 1 else Product(d)
        ident = autos.SemilinearAut.identity(table, ring)
        probe = autos.centralizer_probe(ident)
        rep.record(probe.ok, "identity-commutes", {"ring": str(ring)})
    rep.result = witnesses
    return rep.finish()


SUITES: dict[str, Suite] = {s.name: s for s in [
    Suite("jacobi", "exhaustive Jacobi identity on basis triples", run_jacobi, 1),
    Suite("antisymmetry", "antisymmetry of basis brackets", run_antisymmetry, 1),
    Suite("steinberg", "additivity, h-conjugation of x_a(r), and x_a(r)^(s^2) conjugacy", run_steinberg),
    Suite("unipotence", "unipotence certificates and the unipotent power polynomial", run_unipotence),
    Suite("formula1", "commutator of level-1 curves modulo t^3", run_formula1),
    Suite("prop6", "h_i from x_i(1), x_i, x_-i and tangent realisation of the basis", run_prop6),
    Suite("retraction-laws", "substitution t -> t+t', t*t' and idempotence of REP_r", run_retraction),
    Suite("decompose-roundtrip", "diagram o torus o weyl round trip over Q and Q^d", run_decompose),
    Suite("semilinear", "extraction of the ring automorphism over Q^2 and Q^3", run_semilinear),
    Suite("differential", "differential of standard automorphisms", run_differential),
    Suite("centralizer", "generator witnesses for nontrivial automorphisms", run_centralizer),
]}


def suite_registry() -> list[tuple[str, str]]:
    return [(s.name, s.description) for s in SUITES.values()]


def run_suite(name: str, table: StructureTable, seed: int = 0, samples: int | None = None) -> Report:
    suite = SUITES[name]
    if table.rank < suite.min_rank:
        raise ValueError(f"suite {name} needs rank >= {suite.min_rank}")
    rep = suite.run(table, random.Random(f"{seed}:{name}:{table.rs.name}"), samples)
    rep.suite = name
    rep.meta.setdefault("system", table.rs.name)
    rep.meta["seed"] = seed
    return rep


def run_all(table: StructureTable, seed: int = 0, samples: int | None = None,
            names: list[str] | None = None) -> Report:
    rep = Report("all", meta={"system": table.rs.name, "seed": seed})
    for name in names or list(SUITES):
        if table.rank < SUITES[name].min_rank:
            continue
        rep.add_section(run_suite(name, table, seed, samples))
    return rep.finish()
