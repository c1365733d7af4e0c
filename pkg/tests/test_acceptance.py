"""The ten acceptance criteria, each at its stated size and time limit."""

from fractions import Fraction
import functools
import random
import signal
import time

from conftest import ACCEPTANCE
from fthreehalves.anatomy import shift_middle
from fthreehalves.decompose import decompose, find_support_shift, support_shift_conjugate
from fthreehalves.exactnum import SixAdic
from fthreehalves.moves import RULE_GROUPS, verify_rules
from fthreehalves.oracle import verify_min_length
from fthreehalves.plmap import PLMap, compose, evaluate as apply, generator, hang_map, identity, invert, is_member, stickbug_map, support
from fthreehalves.treepair import from_plmap, parse_pair, random_member
from fthreehalves.words import Word, evaluate, relations


def criterion(num, title):
    def deco(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t = time.perf_counter()
            try:
                detail = fn(*args, **kwargs)
            except BaseException as exc:
                line = f"criterion {num:2d} FAIL  {title} ({time.perf_counter() - t:.1f} s): {str(exc).splitlines()[0][:160]}"
                ACCEPTANCE[num] = line
                print(line)
                raise
            line = f"criterion {num:2d} PASS  {title} ({time.perf_counter() - t:.1f} s)" + (f": {detail}" if detail else "")
            ACCEPTANCE[num] = line
            print(line)

        return run

    return deco


def _random_word(rng, n):
    out = []
    while len(out) < n:
        c = rng.choice("lrLR")
        if out and out[-1] == c.swapcase():
            continue
        out.append(c)
    return "".join(out)


def _six(q):
    q = Fraction(q)
    return SixAdic(q.numerator, q.denominator)


def _from_pieces(pieces):
    """Map from ``(lo, hi, slope, intercept)`` pieces written out by hand."""
    pts = [(_six(pieces[0][0]), _six(pieces[0][0] * pieces[0][2] + pieces[0][3]))]
    for lo, hi, a, b in pieces:
        pts.append((_six(hi), _six(a * hi + b)))
    return PLMap(pts)


F = Fraction
L_PIECES = [(F(0), F(2, 9), F(3, 2), F(0)), (F(2, 9), F(1, 3), F(1), F(1, 9)), (F(1, 3), F(2, 3), F(2, 3), F(2, 9)), (F(2, 3), F(1), F(1), F(0))]
R_PIECES = [(F(0), F(1, 3), F(1), F(0)), (F(1, 3), F(5, 9), F(3, 2), F(-1, 6)), (F(5, 9), F(2, 3), F(1), F(1, 9)), (F(2, 3), F(1), F(2, 3), F(1, 3))]
L_PAIR_TEXT = "(pair (3 (3 * * *) (2 * *) *) (3 (2 * *) (3 * * *) *))"
R_PAIR_TEXT = "(pair (3 * (3 * * *) (2 * *)) (3 * (2 * *) (3 * * *)))"


@criterion(1, "generator fidelity")
def test_generator_fidelity():
    t = time.perf_counter()
    for text, pieces, name in ((L_PAIR_TEXT, L_PIECES, "l"), (R_PAIR_TEXT, R_PIECES, "r")):
        f = parse_pair(text).to_plmap()
        assert f == _from_pieces(pieces), name
        assert f == generator(name)
        for lo, hi, a, b in pieces:
            for x in (lo, (lo + hi) / 2, hi):
                assert apply(f, _six(x)) == _six(a * x + b)
    elapsed = time.perf_counter() - t
    assert elapsed < 0.1, f"took {elapsed:.3f} s"


@criterion(2, "relation verification")
def test_relation_verification():
    t = time.perf_counter()
    rels = relations()
    for rel in rels:
        assert len(rel.word) == 20
        assert evaluate(rel.word) == rel.pair.to_plmap(), rel.name
    elapsed = time.perf_counter() - t
    assert elapsed < 1, f"took {elapsed:.2f} s"
    return ", ".join(f"{r.name} = {r.word}" for r in rels)


@criterion(3, "minimality of both relation words")
def test_minimality():
    t = time.perf_counter()
    for rel in relations():
        assert verify_min_length(rel.pair.to_plmap(), 20), f"{rel.name} has a shorter word"
    elapsed = time.perf_counter() - t
    assert elapsed < 300, f"took {elapsed:.0f} s"
    return "no word of length < 20 reaches either element"


@criterion(4, "stick-bug breakpoints, n <= 4")
def test_stick_bug_breakpoints():
    for n in range(5):
        s = F(1, 3**n)
        left = [(F(0), F(0)), (2 * s / 9, s / 3), (s / 3, 4 * s / 9), (2 * s / 3, 2 * s / 3), (F(1), F(1))]
        right = [(F(0), F(0)), (1 - 2 * s / 3, 1 - 2 * s / 3), (1 - 4 * s / 9, 1 - s / 3), (1 - s / 3, 1 - 2 * s / 9), (F(1), F(1))]
        for side, expected in (("left", left), ("right", right)):
            pts = [(_six(x), _six(y)) for x, y in expected]
            pts = [p for i, p in enumerate(pts) if i == 0 or p != pts[i - 1]]
            assert stickbug_map(n, side) == PLMap(pts), (n, side)


class _OutOfTime(Exception):
    pass


def _raise_out_of_time(signum, frame):
    raise _OutOfTime


@criterion(5, "round-trip decomposition of 500 random elements")
def test_round_trip_decomposition():
    budget = 600.0
    rng = random.Random(500)
    items = [("pair", random_member(rng, max_depth=4)) for _ in range(250)]
    items += [("word", Word(_random_word(rng, rng.randint(0, 24)))) for _ in range(250)]
    done, start = {"pair": 0, "word": 0}, time.perf_counter()
    old = signal.signal(signal.SIGALRM, _raise_out_of_time)
    signal.setitimer(signal.ITIMER_REAL, budget)
    try:
        for kind, x in items:
            target = x.to_plmap() if kind == "pair" else evaluate(x)
            w = decompose(x, check=True)
            assert evaluate(w) == target
            done[kind] += 1
    except _OutOfTime:
        raise AssertionError(
            f"budget of {budget:.0f} s spent after {done['pair']}/250 tree pairs and {done['word']}/250 words"
        ) from None
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)
    return f"{sum(done.values())} elements in {time.perf_counter() - start:.0f} s"


@criterion(6, "rule schemas under all torsos of depth <= 3")
def test_schemas():
    t = time.perf_counter()
    rows = verify_rules(3, RULE_GROUPS)
    bad = [(g, n, e) for g, n, _, e in rows if e is not None]
    assert not bad, bad
    elapsed = time.perf_counter() - t
    assert elapsed < 120, f"took {elapsed:.0f} s"
    return f"{len(rows)} rules, {sum(c for _, _, c, _ in rows)} instances"


@criterion(7, "conjugating by l pulls the support left, 100+ random maps")
def test_conjugation_by_l_moves_support():
    rng = random.Random(7)
    l = generator("l")
    l_inv = invert(l)
    two_thirds = SixAdic(2, 3)
    checked = 0
    while checked < 150:
        eps = SixAdic(rng.randint(0, 35), 54)
        width = two_thirds - eps
        if rng.random() < 0.5:
            width = width * SixAdic(rng.randint(1, 8), 8)
        f = hang_map(evaluate(_random_word(rng, rng.randint(1, 10))), eps, width)
        if not support(f).within(eps, two_thirds):
            raise AssertionError("generated map leaves [eps, 2/3]")
        g = compose(compose(l_inv, f), l)
        assert support(g).within(apply(l, eps), two_thirds), (str(eps), f.to_json())
        checked += 1
    return f"{checked} maps"


@criterion(8, "support shift for n = 1, 2, 3")
def test_support_shift():
    lo, hi = SixAdic(1, 3), SixAdic(2, 3)
    ks = []
    for n in (1, 2, 3):
        k = find_support_shift(n)
        assert support(support_shift_conjugate(n, k)).within(lo, hi)
        assert k == 0 or not support(support_shift_conjugate(n, k - 1)).within(lo, hi)
        ks.append(k)
    return f"k = {ks}"


@criterion(9, "middle-third shift on 100+ random pairs")
def test_shift_isomorphism():
    rng = random.Random(9)
    lo, hi = SixAdic(1, 3), SixAdic(2, 3)
    for _ in range(120):
        u, v = (Word(_random_word(rng, rng.randint(0, 10))) for _ in range(2))
        p, q = (parse_pair_of(w) for w in (u, v))
        su, sv = shift_middle(p).to_plmap(), shift_middle(q).to_plmap()
        assert shift_middle(parse_pair_of(u * v)).to_plmap() == compose(su, sv)
        assert shift_middle(parse_pair_of(~u)).to_plmap() == invert(su)
        assert support(su).within(lo, hi)
        assert su == hang_map(evaluate(u), lo, lo)
    return "120 pairs"


def parse_pair_of(w):
    return from_plmap(evaluate(w))


@criterion(10, "group laws on 1000+ random elements")
def test_group_laws():
    rng = random.Random(10)
    one = identity()
    elems = [evaluate(_random_word(rng, rng.randint(0, 12))) for _ in range(1000)]
    for i, f in enumerate(elems):
        g, h = elems[(7 * i + 1) % len(elems)], elems[(13 * i + 5) % len(elems)]
        assert compose(compose(f, g), h) == compose(f, compose(g, h))
        assert compose(f, invert(f)) == one == compose(invert(f), f)
        assert compose(f, one) == f == compose(one, f)
        assert is_member(f) and is_member(compose(f, g)) and is_member(invert(f))
    return f"{len(elems)} elements"
