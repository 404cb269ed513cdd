"""Command-line front end: parse, normalize, lts, equiv, abp.

Exit codes: 0 success (or "equivalent"/"verified"), 1 verified false,
2 usage, input or resource error.  Diagnostics go to standard error;
artifacts go to standard output or the ``--out`` path.
"""

import argparse
import os
import re
import sys

from . import __version__
from . import equivalence as E
from . import parser as P
from . import terms as T
from .abp import AbpParams, abp_diagnostics, verify_abp
from .errors import AptcError, ConfigError
from .rewriter import format_trace, normalize
from .sos import DEFAULT_BOUNDS, build_lts

BOUND_KEYS = {"max_states": "max_states", "horizon": "horizon", "unfold": "unfold_depth"}


class UsageError(Exception):
    pass


def parse_bounds(text):
    """``max_states=N,horizon=N,unfold=N`` to a bounds dict (positive integers)."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if "=" not in item:
            raise UsageError("bad bound %r (expected key=N)" % item)
        k, v = (s.strip() for s in item.split("=", 1))
        if k not in BOUND_KEYS:
            raise UsageError("unknown bound %r" % k)
        if not v.isdigit() or int(v) <= 0:
            raise UsageError("bound %s must be a positive integer" % k)
        out[BOUND_KEYS[k]] = int(v)
    return out


def read_source(arg):
    """Contents of file ``arg``, or ``arg`` itself when no such file exists."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read(), arg
    return arg, "<inline>"


def infer_config(texts, mode):
    """Alphabet of every label-like identifier in the inputs; no γ, ♯ or ≤."""
    labels = set()
    for text in texts:
        heads = set(re.findall(r"^\s*([A-Za-z_][\w']*)\s*=", text, re.M))
        body = re.sub(r"^\s*(spec\s+\S+|end)\s*$", "", text, flags=re.M)
        body = re.sub(r"<\s*[\w']+\s*\|\s*[\w']+\s*>", "", body)
        body = re.sub(r"^\s*[A-Za-z_][\w']*\s*=", "", body, flags=re.M)
        for tok in P.tokenize(body):
            if tok.kind == "ident" and tok.text not in P.KEYWORDS and tok.text not in heads:
                labels.add(tok.text)
    return T.AlgebraConfig.make(labels, mode=mode)


def load_config(path, texts, mode):
    if path:
        with open(path, encoding="utf-8") as fh:
            config = P.load_config(fh.read())
        if mode and mode != config.mode:
            config = T.AlgebraConfig.make(config.alphabet, dict(config.gamma), config.conflict,
                                          config.causality, mode)
        return config
    return infer_config(texts, mode or T.DRT)


def read_abp_params(path):
    """``key = value`` lines; ``data`` is a comma-separated list."""
    if not path:
        return AbpParams()
    kw = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("expected key = value, got %r" % line, "abp")
            k, v = (s.strip() for s in line.split("=", 1))
            if k == "data":
                kw[k] = tuple(x.strip() for x in v.split(",") if x.strip())
            elif k == "mode":
                kw[k] = v
            elif k in ("t1", "t2", "t1p", "t2p", "horizon", "max_alphabet"):
                if not re.fullmatch(r"[0-9]+", v):
                    raise ConfigError("must be a natural number", k)
                kw[k] = int(v)
            else:
                raise ConfigError("unknown key %r" % k, "abp")
    return AbpParams(**kw)


def _manifest(args, bounds, inputs):
    b = dict(DEFAULT_BOUNDS)
    b.update(bounds)
    lines = ["aptc-timed run",
             "version: %s" % __version__,
             "command: %s" % args.command,
             "inputs: %s" % " ".join(inputs),
             "config: %s" % (args.config or ("<protocol>" if args.command == "abp"
                                             else "<inferred>")),
             "bounds: %s" % ",".join("%s=%d" % (k, b[k]) for k in sorted(b)),
             "format: structured"]
    return "\n".join(lines) + "\n"


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args):
    bounds = parse_bounds(args.bounds)
    status = 0
    if args.command == "abp":
        params = read_abp_params(args.params)
        if args.mode:
            params = AbpParams(**{**params.__dict__, "mode": args.mode})
        report = verify_abp(params, bounds, sabotage=args.sabotage)
        body = report.text()
        if args.diagnostics:
            body += "".join("diagnostic: %s\n" % d
                            for d in abp_diagnostics(params, bounds, args.sabotage))
        status = 0 if report.verdict else 1
        inputs = [args.params or "<default>"]
        bounds = {"horizon": params.horizon, **bounds}
    else:
        files = [args.term] if args.command != "equiv" else [args.left, args.right]
        sources = [read_source(f) for f in files]
        config = load_config(args.config, [s for s, _ in sources], args.mode)
        terms = [P.parse_term_file(s, config)[0] for s, _ in sources]
        inputs = [name for _, name in sources]
        if args.command == "parse":
            body = T.pretty(T.canonicalize(terms[0])) + "\n"
        elif args.command == "normalize":
            trace = [] if args.trace else None
            nf = normalize(terms[0], config, trace=trace)
            body = T.pretty(nf) + "\n"
            if args.trace:
                tr = format_trace(trace)
                tr += "\n" if tr else ""
                sys.stderr.write(tr)
                if args.format == "structured":
                    body += "--- trace\n" + tr
        elif args.command == "lts":
            body = build_lts(terms[0], config, bounds).export().decode("utf-8")
        else:
            l1, l2 = (build_lts(t, config, bounds) for t in terms)
            check = {"step": E.step_bisim, "rb": E.rb_step_bisim,
                     "pomset": E.pomset_bisim_small, "hp": E.hp_bisim_small}[args.kind]
            report = check(l1, l2)
            body = report.text()
            status = 0 if report.verdict else 1
    if args.format == "structured":
        body = _manifest(args, bounds, inputs) + "--- result\n" + body
    _emit(args, body)
    return status


def build_parser():
    ap = argparse.ArgumentParser(prog="aptc-timed", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="configuration file ([alphabet] [gamma] ...)")
    common.add_argument("--mode", choices=[T.DRT, T.DAT], help="override the timing mode")
    common.add_argument("--bounds", help="max_states=N,horizon=N,unfold=N")
    common.add_argument("--out", help="write the artifact here instead of standard output")
    common.add_argument("--format", choices=["text", "structured"], default="text")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("parse", "print the canonical term"),
                           ("normalize", "rewrite to a basic term"),
                           ("lts", "export the timed transition system")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("term", help="term file or inline term")
        if name == "normalize":
            p.add_argument("--trace", action="store_true", help="print the rewrite trace")
    p = sub.add_parser("equiv", parents=[common], help="compare two terms")
    p.add_argument("kind", choices=["step", "rb", "pomset", "hp"])
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("abp", parents=[common], help="verify the alternating bit protocol")
    p.add_argument("params", nargs="?", help="key = value parameter file")
    p.add_argument("--sabotage", action="store_true",
                   help="drop the acknowledgement communications")
    p.add_argument("--diagnostics", action="store_true")
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return _run(args)
    except UsageError as e:
        sys.stderr.write("usage error: %s\n" % e)
    except AptcError as e:
        sys.stderr.write("error: %s: %s\n" % (type(e).__name__, e))
    except OSError as e:
        sys.stderr.write("error: %s\n" % e)
    except RecursionError:
        sys.stderr.write("error: term too deeply nested\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
