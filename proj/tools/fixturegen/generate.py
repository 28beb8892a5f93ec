#!/usr/bin/env python3
"""Regenerate the bundled covering fixtures.

Uses PARI/GP (through the `cypari` wheel) as an independent oracle for class
groups, unit groups, prime decompositions and Galois conjugates.  Everything
written here is re-verified exactly by `capkern validate`; PARI is never
needed at run time.

    pip install cypari
    python3 tools/fixturegen/generate.py fixtures/
"""
import itertools
import sys
from fractions import Fraction
from pathlib import Path

from cypari import pari

pari.allocatemem(400 * 10**6, silent=True)


class Field:
    def __init__(self, label, poly, basis_rows):
        self.label = label
        self.poly = pari(poly)
        self.d = int(self.poly.poldegree())
        self.basis = [[Fraction(str(c)) for c in row] for row in basis_rows]
        self.bnf = pari.bnfinit(self.poly, 1)
        self.nf = self.bnf[6]
        # inverse of the basis matrix (rows = basis elements in power basis)
        M = pari(mat_str(self.basis))
        self.binv = M ** -1

    # -- element conversion -------------------------------------------------
    def power_coords(self, elt):
        """PARI element (polmod / nf column / int) -> power-basis coordinates."""
        alg = pari.nfbasistoalg(self.nf, elt).lift() if not isinstance(elt, int) else pari(elt)
        alg = pari(alg)
        return [Fraction(str(pari.polcoef(alg, k, "x"))) for k in range(self.d)]

    def coords(self, elt):
        v = self.power_coords(elt)
        out = []
        for j in range(self.d):
            s = Fraction(0)
            for k in range(self.d):
                s += v[k] * Fraction(str(self.binv[k, j]))
            out.append(s)
        return out

    def alg(self, coords):
        """integral-basis coordinates -> PARI polynomial in x."""
        terms = []
        for c, row in zip(coords, self.basis):
            for k, b in enumerate(row):
                if c * b != 0:
                    terms.append(f"({c * b})*x^{k}")
        return pari("+".join(terms) if terms else "0")

    def prime_line(self, pr):
        p = int(pr[0])
        return f"{p} : {fmt(self.coords(pr[1]))}"

    def primes_above(self, p):
        return list(pari.idealprimedec(self.nf, p))

    def header(self, tag):
        sig = self.nf[1]
        disc = self.nf[2]
        coeffs = [str(pari.polcoef(self.poly, k)) for k in range(self.d + 1)]
        rows = " | ".join(fmt(r) for r in self.basis)
        return [
            f"[field {tag}]",
            f"label = {self.label}",
            f"polynomial = {' '.join(coeffs)}",
            f"basis = {rows}",
            f"discriminant = {disc}",
            f"signature = {sig[0]} {sig[1]}",
            "",
        ]


def mat_str(rows):
    return "Mat([" + ";".join(",".join(str(c) for c in r) for r in rows) + "])"


def fmt(v):
    return " ".join(str(c) for c in v)


def ideal_key(nf, I):
    return str(pari.idealhnf(nf, I))


def class_group_block(field, tag, fb, max_h=4):
    """Relations over the factor base `fb`, found by a small-element search."""
    nf = field.nf
    h = int(field.bnf.bnf_get_no())
    keys = [ideal_key(nf, P) for P in fb]
    lines = [f"[classgroup {tag}]"]
    for P in fb:
        lines.append(f"prime = {field.prime_line(P)}")
    relations = []

    def lattice_det(rows):
        if not rows:
            return None
        M = pari(mat_str(rows))
        H = pari.mathnf(M.mattranspose())
        if H.matsize()[1] < len(fb):
            return None
        return abs(int(H.matdet()))

    def rank(rows):
        return int(pari(mat_str(rows)).matrank()) if rows else 0

    # products of the primes above each rational prime
    seen_p = []
    for P in fb:
        p = int(P[0])
        if p in seen_p:
            continue
        seen_p.append(p)
        dec = field.primes_above(p)
        if all(ideal_key(nf, Q) in keys for Q in dec):
            row = [0] * len(fb)
            for Q in dec:
                row[keys.index(ideal_key(nf, Q))] = int(Q[2])
            relations.append((row, field.coords(pari(p))))
    H = max_h
    cand = itertools.product(range(-H, H + 1), repeat=field.d)
    for c in sorted(cand, key=lambda t: (sum(abs(x) for x in t), t)):
        det = lattice_det([r for r, _ in relations])
        if det is not None and det == h:
            break
        if all(x == 0 for x in c):
            continue
        a = field.alg([Fraction(x) for x in c])
        fa = pari.idealfactor(nf, a)
        rows = fa.matsize()[0]
        row = [0] * len(fb)
        ok = True
        for i in range(rows):
            k = ideal_key(nf, fa[i, 0])
            if k not in keys:
                ok = False
                break
            row[keys.index(k)] = int(fa[i, 1])
        if not ok or all(x == 0 for x in row):
            continue
        old_rows = [r for r, _ in relations]
        prev, new = lattice_det(old_rows), lattice_det(old_rows + [row])
        grows = rank(old_rows + [row]) > rank(old_rows)
        if grows or (new is not None and prev is not None and new < prev):
            relations.append((row, [Fraction(x) for x in c]))
    assert lattice_det([r for r, _ in relations]) == h, (tag, relations)
    for row, w in relations:
        lines.append(f"relation = {fmt(row)} : {fmt(w)}")
    lines.append("")
    return lines, h


def principal_relations_block(field, tag, fb):
    """Trivial class group: one relation per prime with a principal generator."""
    assert int(field.bnf.bnf_get_no()) == 1
    assert int(field.bnf.bnfcertify()) == 1
    lines = [f"[classgroup {tag}]"]
    for P in fb:
        lines.append(f"prime = {field.prime_line(P)}")
    for i, P in enumerate(fb):
        res = pari.bnfisprincipal(field.bnf, P)
        row = [0] * len(fb)
        row[i] = 1
        lines.append(f"relation = {fmt(row)} : {fmt(field.coords(res[1]))}")
    lines.append("")
    return lines


def units_block(field, tag, torsion=None, free=None):
    tu = pari.member_tu(field.bnf) if hasattr(pari, 'member_tu') else pari('(b)->b.tu')(field.bnf)
    w = int(tu[0])
    zeta = torsion if torsion is not None else field.coords(tu[1])
    fus = free if free is not None else [field.coords(u) for u in pari('(b)->b.fu')(field.bnf)]
    # the supplied generators must generate the full unit group
    if free is not None:
        M = []
        for u in free:
            e = pari.bnfisunit(field.bnf, field.alg(u))
            M.append([int(x) for x in list(e)[:-1]])
        if M:
            assert abs(int(pari(mat_str(M)).matdet())) == 1
    lines = [f"[units {tag}]", f"torsion = {fmt(zeta)} : {w}"]
    for u in fus:
        lines.append(f"free = {fmt(u)}")
    lines.append("")
    return lines, w, len(fus)


def automorphisms(K, F, emb):
    """Automorphisms of K fixing the embedded generator of F, identity first."""
    conj = pari.nfgaloisconj(K.nf)
    x = pari("x")
    emb_alg = K.alg(emb)
    out = []
    for s in conj:
        img = pari.Mod(pari.subst(emb_alg.lift() if hasattr(emb_alg, "lift") else emb_alg, "x", s), K.poly)
        if img == pari.Mod(emb_alg, K.poly):
            out.append(s)
    out.sort(key=lambda s: (s != x, str(s)))
    return out


def galois_block(K, auts, order_table):
    n = len(auts)
    lines = ["[galois]", f"order = {n}",
             "table = " + " | ".join(fmt(r) for r in order_table)]
    for s in auts:
        lines.append(f"automorphism = {fmt(K.coords(pari.Mod(s, K.poly)))}")
    lines.append("")
    return lines


def cyclic_ordering(K, auts):
    """Order automorphisms as identity, s, s^2, ... for a cyclic group."""
    n = len(auts)
    x = pari("x")
    gen = next(s for s in auts if s != x and all(
        pari.Mod(pari.subst(s, "x", s), K.poly).lift() != x or n == 2 for _ in [0]))
    seq = [x]
    cur = x
    for _ in range(n - 1):
        cur = pari.Mod(pari.subst(cur, "x", gen), K.poly).lift()
        seq.append(cur)
    assert len(set(str(s) for s in seq)) == n
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return seq, table


def fixture_a(out):
    F = Field("Q(sqrt(-5))", "x^2+5", [[1, 0], [0, 1]])
    # basis 1, i, eps, i*eps for theta = i*eps, eps = (1+sqrt5)/2
    K = Field("Q(sqrt(-5), i)", "x^4+3*x^2+1",
              [[1, 0, 0, 0], [0, -2, 0, -1], [-1, 0, -1, 0], [0, 1, 0, 0]])
    # sqrt(-5) = 2*i*eps - i = theta^3 + 4*theta
    emb = K.coords(pari("Mod(x^3+4*x, x^4+3*x^2+1)"))
    assert pari.subst(F.poly, "x", K.alg(emb)) % K.poly == 0
    auts, table = cyclic_ordering(K, automorphisms(K, F, emb))
    fbF = F.primes_above(2) + F.primes_above(3)
    fbK = K.primes_above(2) + K.primes_above(3)
    lines = ["# F = Q(sqrt(-5)), K = Q(sqrt(-5), i) = Hilbert class field of F, Sigma = {inf}",
             "format_version = 1", "name = fixture-a", "seed = 20170401", ""]
    lines += F.header("F") + K.header("K")
    lines += ["[embedding]", f"image = {fmt(emb)}", ""]
    lines += galois_block(K, auts, table)
    lines += ["[sigma]", "archimedean = all", "infinite_ramification = none", ""]
    cgF, hF = class_group_block(F, "F", fbF)
    lines += cgF + principal_relations_block(K, "K", fbK)
    uF, wF, rF = units_block(F, "F")
    uK, wK, rK = units_block(K, "K", torsion=[0, 1, 0, 0], free=[[0, 0, 1, 0]])
    lines += uF + uK
    lines += ["[expectations]", "term_orders = 2 2 2 4 2", "kernel_invariants = 2",
              f"class_number_F = {hF}", "class_number_K = 1",
              f"torsion_order_K = {wK}", f"unit_rank_K = {rK}", ""]
    (out / "fixture_a.fix").write_text("\n".join(lines))


def fixture_b(out):
    F = Field("Q(sqrt(-23))", "x^2-x+6", [[1, 0], [0, 1]])
    Kpoly = "x^6-3*x^5+5*x^4-5*x^3+5*x^2-3*x+1"
    K = Field("Hilbert class field of Q(sqrt(-23))", Kpoly, [[int(i == j) for j in range(6)] for i in range(6)])
    nfy = pari.nfinit(pari.subst(K.poly, "x", "y"))
    roots = pari.nfroots(nfy, F.poly)
    emb = K.coords(pari.Mod(pari.subst(pari.lift(roots[0]), "y", "x"), K.poly))
    auts, table = cyclic_ordering(K, automorphisms(K, F, emb))
    fbF = F.primes_above(2) + F.primes_above(3)
    fbK = K.primes_above(2) + K.primes_above(3)
    lines = ["# F = Q(sqrt(-23)), K = splitting field of x^3 - x - 1 = Hilbert class field of F, Sigma = {inf}",
             "format_version = 1", "name = fixture-b", "seed = 20170402", ""]
    lines += F.header("F") + K.header("K")
    lines += ["[embedding]", f"image = {fmt(emb)}", ""]
    lines += galois_block(K, auts, table)
    lines += ["[sigma]", "archimedean = all", "infinite_ramification = none", ""]
    cgF, hF = class_group_block(F, "F", fbF)
    lines += cgF + principal_relations_block(K, "K", fbK)
    uF, wF, rF = units_block(F, "F")
    uK, wK, rK = units_block(K, "K")
    lines += uF + uK
    lines += ["[expectations]", "term_orders = 1 1 3 3 1", "kernel_invariants = 3",
              f"class_number_F = {hF}", "class_number_K = 1",
              f"torsion_order_K = {wK}", f"unit_rank_K = {rK}", ""]
    (out / "fixture_b.fix").write_text("\n".join(lines))


if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    out.mkdir(parents=True, exist_ok=True)
    fixture_a(out)
    fixture_b(out)
