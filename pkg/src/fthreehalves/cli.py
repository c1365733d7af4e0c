"""Command line entry point: ``f32 <command> ...``.

Results go to stdout (JSON where structured), diagnostics to stderr.
Exit status is 0 on success, 1 when a check fails or an input is not a
member of the group, and 2 for usage and parse errors.
"""

import argparse
import json
import os
import random
import sys
import time

from .anatomy import classify
from .decompose import decompose
from .errors import F32Error, InvalidMap, InvalidTreePair, NotMember, NotSixAdic, ParseError
from .moves import RULE_GROUPS, verify_rules
from .oracle import shortest_word, verify_min_length
from .plmap import PLMap, member_violation
from .treepair import TreePair, parse_pair, random_member, reduce
from .words import Word, evaluate, relations

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def read_text(source):
    """``-`` means stdin, an existing path means its contents, anything else is literal."""
    if source == "-":
        return sys.stdin.read()
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return source


def parse_element(source):
    """Read a word, word program, map JSON or tree pair (s-expression or JSON)."""
    text = read_text(source).strip()
    try:
        if text[:1] in "{[" and text:
            obj = json.loads(text)
            if isinstance(obj, list):
                return Word.from_json(obj)
            if "points" in obj:
                return PLMap.from_json(obj)
            if "domain" in obj:
                return TreePair.from_json(obj)
            if "program" in obj:
                return Word.from_program(obj)
            raise UsageError("JSON input needs 'points', 'domain' or 'program'")
        if text.startswith("("):
            return parse_pair(text)
        return Word(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad JSON: {exc}") from exc
    except InvalidMap as exc:
        if isinstance(exc.__cause__, NotSixAdic):
            raise NotMember(str(exc.__cause__), criterion="breakpoint ring") from exc
        raise UsageError(str(exc)) from exc
    except (ParseError, InvalidTreePair) as exc:
        raise UsageError(str(exc)) from exc


def to_map(x):
    if isinstance(x, Word):
        return evaluate(x)
    if isinstance(x, TreePair):
        return x.to_plmap()
    return x


def to_pair(x):
    from .decompose import as_pair

    return as_pair(x)


def _word_out(w, fmt, max_letters):
    if fmt == "program":
        return w.to_program()
    if w.length > max_letters:
        raise UsageError(f"word has {w.length} letters; use --format program (or raise --max-letters)")
    return str(w) if fmt == "text" else w.to_json()


# -- commands ----------------------------------------------------------------------


def cmd_verify_relations(args):
    report, ok = [], True
    for rel in relations():
        wm, pm = evaluate(rel.word), rel.pair.to_plmap()
        holds = wm == pm
        ok &= holds
        report.append(
            {
                "name": rel.name,
                "word": str(rel.word),
                "pair": rel.pair.to_sexpr(),
                "word_map": wm.to_json(),
                "pair_map": pm.to_json(),
                "holds": holds,
            }
        )
    if args.json:
        print(_dump({"ok": ok, "relations": report}))
    else:
        for r in report:
            print(f"{r['name']}: {'holds' if r['holds'] else 'FAILS'}")
            print(f"  word {r['word']}")
            print(f"  word map {_dump(r['word_map'])}")
            print(f"  pair map {_dump(r['pair_map'])}")
    return OK if ok else FAILED


def cmd_verify_schemas(args):
    t = time.perf_counter()
    rows = verify_rules(args.depth, tuple(args.group) if args.group else RULE_GROUPS)
    ok = all(err is None for *_, err in rows)
    if args.json:
        out = [{"group": g, "rule": n, "instances": c, "error": e} for g, n, c, e in rows]
        print(_dump({"ok": ok, "depth": args.depth, "rules": out, "seconds": round(time.perf_counter() - t, 3)}))
    else:
        for g, n, c, e in rows:
            print(f"{'ok  ' if e is None else 'FAIL'} {g}/{n}: {c} instances" + (f" ({e})" if e else ""))
    return OK if ok else FAILED


def cmd_decompose(args):
    x = parse_element(args.input)
    if isinstance(x, PLMap):
        why = member_violation(x)
        if why:
            raise NotMember(why.split(": ", 1)[1], criterion="slope group")
    if args.audit:
        w, audit = decompose(x, audit=True, check=args.check, method=args.method)
        print(_dump({"word": _word_out(w, args.format, args.max_letters), "audit": audit.to_json()}))
    else:
        w = decompose(x, check=args.check, method=args.method)
        out = _word_out(w, args.format, args.max_letters)
        print(out if isinstance(out, str) else _dump(out))
    if not w:
        print("note: the element is the identity (empty word)", file=sys.stderr)
    return OK


def cmd_eval(args):
    f = to_map(parse_element(args.input))
    print(f.pretty() if args.pretty else _dump(f.to_json()))
    return OK


def cmd_classify(args):
    p = to_pair(parse_element(args.input))
    print(_dump(classify(p).to_json()))
    return OK


def cmd_random(args):
    rng = random.Random(args.seed)
    if args.mode == "word":
        letters, last = [], None
        while len(letters) < args.size:
            c = rng.choice("lrLR")
            if last is not None and c == last.swapcase():
                continue
            letters.append(c)
            last = c
        print("".join(letters))
    else:
        p = random_member(rng, max_depth=args.size)
        if args.reduce:
            p = reduce(p)
        print(_dump(p.to_json()) if args.json else p.to_sexpr())
    return OK


def cmd_oracle_search(args):
    target = to_map(parse_element(args.target))
    why = member_violation(target)
    if why:
        raise NotMember(why.split(": ", 1)[1], criterion="slope group")
    w = shortest_word(target, args.bound, workers=args.workers)
    if w is None:
        print(f"no word of length <= {args.bound}", file=sys.stderr)
        return FAILED
    print(str(w))
    return OK


def cmd_oracle_min_length(args):
    target = to_map(parse_element(args.target))
    ok = verify_min_length(target, args.below, workers=args.workers)
    print(_dump({"below": args.below, "minimal": ok}))
    return OK if ok else FAILED


def build_parser():
    p = argparse.ArgumentParser(prog="f32", description="Exact computation in the group F(3/2).")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-relations", help="check both 20-letter relations exactly")
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_verify_relations)

    s = sub.add_parser("verify-schemas", help="check every rewrite rule under all small torsos")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--group", action="append", choices=RULE_GROUPS)
    s.add_argument("--json", action="store_true")
    s.set_defaults(run=cmd_verify_schemas)

    s = sub.add_parser("decompose", help="write an element as a word in l and r")
    s.add_argument("input", help="word, map JSON, tree pair, or a file holding one ('-' for stdin)")
    s.add_argument("--audit", action="store_true", help="emit JSON with per-stage summaries")
    s.add_argument("--check", action="store_true", help="verify every stage and the final word exactly")
    s.add_argument("--method", choices=("local", "balanced"), default="local")
    s.add_argument("--format", choices=("text", "json", "program"), default="text")
    s.add_argument("--max-letters", type=int, default=1_000_000)
    s.set_defaults(run=cmd_decompose)

    s = sub.add_parser("eval", help="canonical map JSON of an element")
    s.add_argument("input")
    s.add_argument("--pretty", action="store_true", help="one 'x → y @ slope' row per piece")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("classify", help="family and anatomy of a diagram")
    s.add_argument("input")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("random", help="a random member, deterministic in the seed")
    s.add_argument("mode", choices=("word", "treepair"))
    s.add_argument("--size", type=int, default=10, help="word length, or maximum tree depth")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--json", action="store_true", help="tree pairs as JSON")
    s.add_argument("--reduce", action="store_true", help="reduce the tree pair")
    s.set_defaults(run=cmd_random)

    s = sub.add_parser("oracle", help="brute-force searches over short words")
    osub = s.add_subparsers(dest="oracle_command", required=True)
    o = osub.add_parser("search", help="shortest word up to a length bound")
    o.add_argument("--target", required=True)
    o.add_argument("--bound", type=int, required=True)
    o.add_argument("--workers", type=int, default=1)
    o.set_defaults(run=cmd_oracle_search)
    o = osub.add_parser("min-length", help="check that no word shorter than --below reaches the target")
    o.add_argument("--target", required=True)
    o.add_argument("--below", type=int, required=True)
    o.add_argument("--workers", type=int, default=1)
    o.set_defaults(run=cmd_oracle_min_length)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except NotMember as exc:
        crit = f" (criterion: {exc.criterion})" if exc.criterion else ""
        print(f"not a member of F(3/2): {exc}{crit}", file=sys.stderr)
        return FAILED
    except (ValueError, F32Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
