"""Finitely presented groups.

Words in a free group are tuples of nonzero ints: letter ``k > 0`` is
generator ``k - 1`` and ``-k`` its inverse.  Relators are kept freely and
cyclically reduced.  Group order is certified by Todd-Coxeter coset
enumeration (HLT strategy with a lookahead pass and table compaction) over
the trivial subgroup; abelian invariants come from the Smith form of the
relator exponent matrix.  Coset numbering is deterministic: rows are
processed lowest first and columns in declared generator order, so coset
tables are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .intlin import AbelianInvariants, IntMatrix, cokernel_invariants

DEFAULT_MAX_COSETS = 10**6


class CosetLimitExceeded(RuntimeError):
    """Coset enumeration did not close within the allowed live cosets."""


# -- words ------------------------------------------------------------


def reduce_word(word):
    """Freely reduce: cancel adjacent x x^-1 pairs.  Idempotent."""
    out = []
    for letter in word:
        if not isinstance(letter, int) or letter == 0:
            raise ValueError("word letters must be nonzero ints")
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def inverse_word(word):
    return tuple(-letter for letter in reversed(word))


def cyclically_reduce(word):
    """Strip conjugating prefixes: u w u^-1 -> w.  Input must be reduced."""
    w = list(word)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def power_word(letter, exponent):
    """letter^exponent as a word (letter is a 1-based generator index)."""
    if exponent >= 0:
        return (letter,) * exponent
    return (-letter,) * (-exponent)


def _validate_word(word, ngens):
    for letter in word:
        if abs(letter) > ngens:
            raise ValueError(f"letter {letter} outside generator range 1..{ngens}")


def word_str(word, names):
    if not word:
        return "1"
    parts = []
    for letter in word:
        name = names[abs(letter) - 1]
        parts.append(name if letter > 0 else name + "^-1")
    return " ".join(parts)


# -- presentations -----------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    """Generators (by name) and relators; relators are stored freely and
    cyclically reduced, with trivial relators dropped."""

    names: tuple
    relators: tuple

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        rels = []
        for w in self.relators:
            w = cyclically_reduce(reduce_word(tuple(w)))
            _validate_word(w, len(names))
            if w:
                rels.append(w)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def ngens(self):
        return len(self.names)

    def describe(self):
        gens = ", ".join(self.names) if self.names else ""
        rels = ", ".join(word_str(w, self.names) for w in self.relators)
        return f"< {gens} | {rels} >"


def trivial_presentation():
    return Presentation((), ())


def cyclic_presentation(n, name="t"):
    """The standard presentation of Z/n (n >= 1)."""
    if n < 1:
        raise ValueError("order must be >= 1")
    return Presentation((name,), ((1,) * n,))


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by one target word per source generator.

    Well-definedness (relators map to the identity) is checked on demand via
    ``check_relations``; constructing the object only validates shapes.
    """

    source: Presentation
    target: Presentation
    images: tuple

    def __post_init__(self):
        imgs = tuple(reduce_word(tuple(w)) for w in self.images)
        if len(imgs) != self.source.ngens:
            raise ValueError("need exactly one image per source generator")
        for w in imgs:
            _validate_word(w, self.target.ngens)
        object.__setattr__(self, "images", imgs)

    def map_word(self, word):
        out = []
        for letter in word:
            img = self.images[abs(letter) - 1]
            out.extend(img if letter > 0 else inverse_word(img))
        return reduce_word(out)

    def check_relations(self, method="abelianization", max_cosets=DEFAULT_MAX_COSETS):
        """True when every source relator maps to a trivial target element.

        method 'abelianization' is a necessary check only (image exponent
        vector lies in the target relator lattice); 'coset' is exact but
        needs the target to enumerate within max_cosets.
        """
        if method == "abelianization":
            rows = [_exponent_vector(w, self.target.ngens) for w in self.target.relators]
            lattice = IntMatrix.from_rows(rows, cols=self.target.ngens)
            from .intlin import lattice_contains

            return all(
                lattice_contains(lattice, _exponent_vector(self.map_word(r), self.target.ngens))
                for r in self.source.relators
            )
        if method == "coset":
            table = _enumerate(self.target, max_cosets)
            return all(table.trace_is_trivial(self.map_word(r)) for r in self.source.relators)
        raise ValueError("method must be 'abelianization' or 'coset'")


# -- abelianization ----------------------------------------------------


def _exponent_vector(word, ngens):
    v = [0] * ngens
    for letter in word:
        v[abs(letter) - 1] += 1 if letter > 0 else -1
    return v


def abelianization(p: Presentation) -> AbelianInvariants:
    """Invariants of the abelianised group, via the relator exponent matrix."""
    rows = [_exponent_vector(w, p.ngens) for w in p.relators]
    return cokernel_invariants(IntMatrix.from_rows(rows, cols=p.ngens), p.ngens)


# -- quotients and products ---------------------------------------------


def quotient_by_normal_closure(p: Presentation, words) -> Presentation:
    """p / <<words>>: append the words as relators."""
    extra = []
    for w in words:
        w = tuple(w)
        _validate_word(w, p.ngens)
        extra.append(w)
    return Presentation(p.names, p.relators + tuple(extra))


def _shift_word(word, offset):
    return tuple(
        (abs(letter) + offset) * (1 if letter > 0 else -1) for letter in word
    )


def amalgamated_product(pa, pb, pc, f: GroupHom, g: GroupHom) -> Presentation:
    """Pushout presentation of pa *_{pc} pb along f: C->A and g: C->B.

    Generators are those of pa followed by those of pb; relators are both
    relator sets plus f(c) g(c)^-1 for every generator c of pc.
    """
    if f.source != pc or g.source != pc:
        raise ValueError("f and g must share source pc")
    if f.target != pa or g.target != pb:
        raise ValueError("f must land in pa and g in pb")
    offset = pa.ngens
    used = set(pa.names)
    bnames = []
    for name in pb.names:
        candidate = name
        while candidate in used:
            candidate += "'"
        used.add(candidate)
        bnames.append(candidate)
    relators = list(pa.relators)
    relators.extend(_shift_word(w, offset) for w in pb.relators)
    for i in range(pc.ngens):
        relators.append(f.images[i] + inverse_word(_shift_word(g.images[i], offset)))
    return Presentation(pa.names + tuple(bnames), tuple(relators))


# -- Todd-Coxeter -------------------------------------------------------


def _column(letter):
    idx = abs(letter) - 1
    return 2 * idx + (0 if letter > 0 else 1)


class _CosetTable:
    """HLT coset table over the trivial subgroup (Handbook of CGT, ch. 5)."""

    def __init__(self, ngens, relators, max_cosets):
        self.ncols = 2 * ngens
        self.rels = [[_column(letter) for letter in w] for w in relators]
        self.max = max_cosets
        self.table = [[None] * self.ncols]
        self.p = [0]
        self.nlive = 1

    # union-find; merges always keep the smaller index, so representatives
    # are minimal and numbering stays deterministic
    def rep(self, k):
        r = k
        while self.p[r] != r:
            r = self.p[r]
        while self.p[k] != r:
            self.p[k], k = r, self.p[k]
        return r

    def _merge(self, k, lam, queue):
        k, lam = self.rep(k), self.rep(lam)
        if k != lam:
            mu, nu = (k, lam) if k < lam else (lam, k)
            self.p[nu] = mu
            self.nlive -= 1
            queue.append(nu)

    def _coincidence(self, a, b):
        queue = deque()
        self._merge(a, b, queue)
        while queue:
            gamma = queue.popleft()
            row = self.table[gamma]
            for col in range(self.ncols):
                delta = row[col]
                if delta is None:
                    continue
                self.table[delta][col ^ 1] = None
                mu = self.rep(gamma)
                nu = self.rep(delta)
                if self.table[mu][col] is not None:
                    self._merge(nu, self.table[mu][col], queue)
                elif self.table[nu][col ^ 1] is not None:
                    self._merge(mu, self.table[nu][col ^ 1], queue)
                else:
                    self.table[mu][col] = nu
                    self.table[nu][col ^ 1] = mu
                row[col] = None

    def _define(self, alpha, col):
        if self.nlive >= self.max:
            raise CosetLimitExceeded(
                f"enumeration needs more than {self.max} live cosets"
            )
        new = len(self.table)
        self.table.append([None] * self.ncols)
        self.p.append(new)
        self.nlive += 1
        self.table[alpha][col] = new
        self.table[new][col ^ 1] = alpha

    def _scan(self, alpha, rel, fill):
        f, i = alpha, 0
        b, j = alpha, len(rel) - 1
        while True:
            while i <= j and self.table[f][rel[i]] is not None:
                f = self.rep(self.table[f][rel[i]])
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and self.table[b][rel[j] ^ 1] is not None:
                b = self.rep(self.table[b][rel[j] ^ 1])
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                self.table[f][rel[i]] = b
                self.table[b][rel[i] ^ 1] = f
                return
            if not fill:
                return
            self._define(f, rel[i])

    def _lookahead(self):
        """Deduction/coincidence pass over the whole table; returns cosets freed."""
        before = self.nlive
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] == alpha:
                for rel in self.rels:
                    self._scan(alpha, rel, fill=False)
                    if self.p[alpha] != alpha:
                        break
            alpha += 1
        return before - self.nlive

    def _compact(self, alpha):
        """Drop dead rows, renumber live cosets in order; returns new alpha."""
        mapping = {}
        new_table = []
        for i, row in enumerate(self.table):
            if self.p[i] == i:
                mapping[i] = len(new_table)
                new_table.append(row)
        for row in new_table:
            for col in range(self.ncols):
                if row[col] is not None:
                    row[col] = mapping[self.rep(row[col])]
        new_alpha = sum(1 for k in mapping if k < alpha)
        self.table = new_table
        self.p = list(range(len(new_table)))
        return new_alpha

    def enumerate(self):
        alpha = 0
        while alpha < len(self.table):
            if self.p[alpha] != alpha:
                alpha += 1
                continue
            if len(self.table) > 2 * self.nlive + 64:
                alpha = self._compact(alpha)
            try:
                dead = False
                for rel in self.rels:
                    self._scan(alpha, rel, fill=True)
                    if self.p[alpha] != alpha:
                        dead = True
                        break
                if not dead:
                    for col in range(self.ncols):
                        if self.table[alpha][col] is None:
                            self._define(alpha, col)
            except CosetLimitExceeded:
                if self._lookahead() == 0:
                    raise
                alpha = self._compact(alpha)
                continue
            alpha += 1
        return self.nlive

    def trace_is_trivial(self, word):
        coset = self.rep(0)
        for letter in word:
            coset = self.rep(self.table[coset][_column(letter)])
        return coset == self.rep(0)


def _enumerate(p: Presentation, max_cosets):
    table = _CosetTable(p.ngens, p.relators, max_cosets)
    table.enumerate()
    return table


def todd_coxeter_order(p: Presentation, max_cosets=DEFAULT_MAX_COSETS) -> int:
    """Group order by coset enumeration over the trivial subgroup.

    Raises CosetLimitExceeded when the enumeration does not close within
    ``max_cosets`` live cosets (infinite group, or limit too low).
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    if p.ngens == 0:
        return 1
    return _enumerate(p, max_cosets).nlive


def word_is_trivial(p: Presentation, word, max_cosets=DEFAULT_MAX_COSETS) -> bool:
    """Exact word problem for groups that enumerate within the limit."""
    word = reduce_word(word)
    _validate_word(word, p.ngens)
    if p.ngens == 0:
        return True
    return _enumerate(p, max_cosets).trace_is_trivial(word)


def is_cyclic_of_order(p: Presentation, n: int, max_cosets=DEFAULT_MAX_COSETS) -> bool:
    """Certify |G| = n together with a surjection onto Z/n.

    A group of order n with abelianisation Z/n is cyclic, so the pair of
    checks is a proof, not a heuristic.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    if todd_coxeter_order(p, max_cosets) != n:
        return False
    inv = abelianization(p)
    if n == 1:
        return inv.is_trivial
    return inv.free_rank == 0 and inv.torsion == (n,)


# -- Tietze simplification ----------------------------------------------


def _cyclic_key(word):
    candidates = []
    for w in (word, inverse_word(word)):
        for k in range(len(w)):
            candidates.append(w[k:] + w[:k])
    return min(candidates) if candidates else ()


def _normalise_relators(rels):
    out = []
    seen = set()
    for w in rels:
        w = cyclically_reduce(reduce_word(tuple(w)))
        if not w:
            continue
        key = _cyclic_key(w)
        if key in seen:
            continue
        seen.add(key)
        out.append(w)
    return out


def tietze_simplify(p: Presentation) -> Presentation:
    """Heuristic normaliser: eliminate generators defined by relators of
    length <= 2, drop trivial and duplicate relators.

    The result presents an isomorphic group with at most as many generators.
    This is not a canonical form; group equality is always certified through
    (order, abelianisation), never through syntactic comparison.
    """
    names = list(p.names)
    rels = _normalise_relators(p.relators)
    while True:
        plan = None
        for w in rels:
            if len(w) == 1:
                plan = (abs(w[0]) - 1, ())
                break
            if len(w) == 2 and abs(w[0]) != abs(w[1]):
                x, y = w
                # x^s y^t = 1  =>  x = y^(-t*s)
                gen = abs(x) - 1
                s = 1 if x > 0 else -1
                plan = (gen, (-y * s,))
                break
        if plan is None:
            break
        gen, repl = plan
        inv_repl = inverse_word(repl)
        rewritten = []
        for w in rels:
            out = []
            for letter in w:
                if abs(letter) - 1 == gen:
                    out.extend(repl if letter > 0 else inv_repl)
                else:
                    out.append(letter)
            rewritten.append(out)
        del names[gen]
        shifted = []
        for w in rewritten:
            nw = []
            for letter in w:
                idx = abs(letter) - 1
                if idx > gen:
                    idx -= 1
                nw.append((idx + 1) * (1 if letter > 0 else -1))
            shifted.append(nw)
        rels = _normalise_relators(shifted)
    return Presentation(tuple(names), tuple(rels))
