from hypothesis import strategies as st

from binic.forms import BinaryForm, Unimodular2, discriminant


def forms(n=3, bound=20, nondegenerate=False):
    s = st.lists(st.integers(-bound, bound), min_size=n + 1, max_size=n + 1).map(
        lambda c: BinaryForm(tuple(c)))
    s = s.filter(lambda f: not f.is_zero())
    if nondegenerate:
        s = s.filter(lambda f: discriminant(f) != 0)
    return s


@st.composite
def sl2(draw, bound=5):
    """Products of elementary matrices, entries kept small."""
    a = draw(st.integers(-bound, bound))
    b = draw(st.integers(-bound, bound))
    g = Unimodular2(((1, a), (0, 1))) @ Unimodular2(((1, 0), (b, 1)))
    if draw(st.booleans()):
        g = g @ Unimodular2(((0, 1), (-1, 0)))
    return g


def random_sln(rng, n, bound=3, steps=12):
    """A random element of SL_n(Z) with entries bounded by ``bound``, built from transvections."""
    g = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        row = [a + c * b for a, b in zip(g[i], g[j])]
        if max(abs(x) for x in row) <= bound:
            g[i] = row
    return g


def random_form(rng, n, bound):
    return BinaryForm(tuple(rng.randint(-bound, bound) for _ in range(n + 1)))


def correspondence_ready(f):
    from binic.forms import is_irreducible, is_primitive
    return f[0] != 0 and discriminant(f) != 0 and is_primitive(f) and is_irreducible(f)


def reducible_pattern_pairs(rng, n, count, bound=6):
    """Pairs whose upper-left (n-1)/2 blocks vanish, with a usable resolvent."""
    from binic.harness.patterns import _pattern_pair, corner_zero
    from binic.pairs import resolvent
    out = []
    while len(out) < count:
        p = _pattern_pair(n, corner_zero(n), rng, bound)
        if correspondence_ready(resolvent(p)):
            out.append(p)
    return out


def translated_sections(rng, n, count, bound=10, sln_bound=3):
    """section_e(f) moved by a random SL_n(Z) element, for correspondence-ready f."""
    from binic.pairs import act_sln, section_e
    out = []
    while len(out) < count:
        f = random_form(rng, n, bound)
        if correspondence_ready(f):
            out.append(act_sln(random_sln(rng, n, sln_bound), section_e(f)))
    return out
