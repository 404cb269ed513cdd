"""Surface syntax for terms, recursive specifications and configurations.

Term grammar (loosest binding first)::

    term    := wpar ("+" wpar)*
    wpar    := par ("><" par)*
    par     := seq (("||" | "|") seq)*
    seq     := prefix ("." prefix)*
    prefix  := ("sigma" | "timeout" | "init") "[" NAT "]" "(" term ")"
             | "encap" "{" labels "}" "(" term ")"
             | "abstract" "{" labels "}" "(" term ")"
             | "rename" "{" (IDENT "->" IDENT),* "}" "(" term ")"
             | "theta" "(" term ")"
             | atom
    atom    := IDENT | "deadlock" | "deadlocked" | "tau"
             | "<" IDENT "|" IDENT ">" | "(" term ")" | "(" term "<|" term ")"

``sigma``/``timeout``/``init`` build the relative or absolute operator
according to the configuration mode.  Binary operators associate to the left.
"""

import re

from . import terms as T
from .errors import (ConfigError, DuplicateEquation, SourceSpan, SyntaxError,
                     UnboundVariable, UnknownLabel, UnknownVariable)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<op>\|\||><|<\||->|[+.|()\[\]{},<>=;])
  | (?P<nat>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"sigma", "timeout", "init", "encap", "abstract", "rename", "theta",
            "deadlock", "deadlocked", "tau"}


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def tokenize(text):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SyntaxError("unexpected character %r" % text[pos],
                              SourceSpan(line, pos - line_start + 1))
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        for i, ch in enumerate(s):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text, config, specs=None, variables=None):
        self.toks = tokenize(text)
        self.i = 0
        self.config = config
        self.mode = config.mode
        self.specs = specs or {}
        self.variables = variables  # names allowed as RecVar (spec bodies)

    # token helpers
    def peek(self, k=0):
        return self.toks[self.i + k]

    def at(self, text):
        t = self.peek()
        return t.kind in ("op", "ident") and t.text == text

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise SyntaxError(msg, SourceSpan(tok.line, tok.col, max(1, len(tok.text))))

    def expect(self, text):
        if not self.at(text):
            tok = self.peek()
            self.error("expected %r, found %r" % (text, tok.text or "end of input"))
        return self.take()

    # grammar
    def term(self):
        x = self.wpar()
        while self.at("+"):
            self.take()
            x = T.Alt(x, self.wpar())
        return x

    def wpar(self):
        x = self.par()
        while self.at("><"):
            self.take()
            x = T.WholeParallel(x, self.par())
        return x

    def par(self):
        x = self.seq()
        while self.at("||") or self.at("|"):
            op = self.take().text
            y = self.seq()
            x = T.Parallel(x, y) if op == "||" else T.CommMerge(x, y)
        return x

    def seq(self):
        x = self.prefix()
        while self.at("."):
            self.take()
            x = T.Seq(x, self.prefix())
        return x

    def _paren_term(self):
        self.expect("(")
        x = self.term()
        self.expect(")")
        return x

    def _labels(self):
        self.expect("{")
        out = []
        while not self.at("}"):
            tok = self.take()
            if tok.kind != "ident" or tok.text in KEYWORDS:
                self.error("expected a label", tok)
            self._check_label(tok)
            out.append(tok.text)
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return out

    def _check_label(self, tok):
        if tok.text not in self.config.alphabet:
            raise UnknownLabel("%s (line %d, column %d)" % (tok.text, tok.line, tok.col))

    def prefix(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text in ("sigma", "timeout", "init"):
            self.take()
            self.expect("[")
            n = self.take()
            if n.kind != "nat":
                self.error("expected a time amount", n)
            self.expect("]")
            body = self._paren_term()
            build = {"sigma": T.delay, "timeout": T.timeout, "init": T.init}[tok.text]
            return build(self.mode, int(n.text), body)
        if tok.kind == "ident" and tok.text in ("encap", "abstract"):
            self.take()
            labs = self._labels()
            body = self._paren_term()
            return (T.Encapsulate if tok.text == "encap" else T.Abstract)(labs, body)
        if tok.kind == "ident" and tok.text == "rename":
            self.take()
            self.expect("{")
            f = {}
            while not self.at("}"):
                a = self.take()
                self.expect("->")
                b = self.take()
                for x in (a, b):
                    if x.kind != "ident" or x.text in KEYWORDS:
                        self.error("expected a label", x)
                    self._check_label(x)
                f[a.text] = b.text
                if not self.at("}"):
                    self.expect(",")
            self.expect("}")
            return T.Rename(f, self._paren_term())
        if tok.kind == "ident" and tok.text == "theta":
            self.take()
            return T.ConflictElim(self._paren_term())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok.kind == "ident":
            self.take()
            if tok.text == "deadlock":
                return T.DEADLOCK
            if tok.text == "deadlocked":
                return T.DEADLOCKED
            if tok.text == "tau":
                return T.SILENT
            if tok.text in KEYWORDS:
                self.error("misplaced keyword %r" % tok.text, tok)
            if self.variables is not None and tok.text in self.variables:
                return T.RecVar(tok.text)
            if tok.text[0].isupper() and self.variables is not None \
                    and tok.text not in self.config.alphabet:
                raise UnboundVariable(tok.text)
            self._check_label(tok)
            return T.act(tok.text)
        if tok.kind == "op" and tok.text == "<":
            self.take()
            var = self.take()
            if var.kind != "ident":
                self.error("expected a recursion variable", var)
            self.expect("|")
            name = self.take()
            if name.kind != "ident":
                self.error("expected a specification name", name)
            self.expect(">")
            spec = self.specs.get(name.text)
            if spec is None:
                raise UnknownVariable("unknown specification %r" % name.text)
            return T.RecConst(var.text, spec)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            x = self.term()
            if self.at("<|"):
                self.take()
                y = self.term()
                self.expect(")")
                return T.Unless(x, y)
            self.expect(")")
            return x
        self.error("unexpected %r" % (tok.text or "end of input"), tok)

    def finish(self):
        if self.peek().kind != "eof":
            self.error("unexpected %r" % self.peek().text)


def parse_term(text, config, specs=None):
    """Parse a closed or open term; ``specs`` maps names to specifications."""
    p = _Parser(text, config, specs)
    if p.peek().kind == "eof":
        p.error("empty term")
    t = p.term()
    p.finish()
    return T.validate(t, config)


def parse_spec(text, config, name="E", specs=None):
    """Parse equations ``X = t`` separated by newlines or ``;``."""
    chunks = [c.strip() for c in re.split(r"[;\n]", text)]
    chunks = [c for c in chunks if c and not c.startswith("#")]
    heads = []
    for c in chunks:
        if "=" not in c:
            raise SyntaxError("equation without '='", SourceSpan(1, 1))
        v = c.split("=", 1)[0].strip()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", v) or v in KEYWORDS:
            raise SyntaxError("bad recursion variable %r" % v, SourceSpan(1, 1))
        if v in heads:
            raise DuplicateEquation(v)
        heads.append(v)
    eqs = []
    for c, v in zip(chunks, heads):
        body = c.split("=", 1)[1]
        p = _Parser(body, config, specs, variables=set(heads))
        t = p.term()
        p.finish()
        for fv in T.free_vars(t):
            if fv not in heads:
                raise UnboundVariable(fv)
        eqs.append((v, T.validate(t, config)))
    return T.LinearRecSpec(eqs, name)


def parse_term_file(text, config):
    """A term file: optional ``spec NAME`` ... ``end`` blocks, then one term."""
    specs = {}
    lines = text.splitlines()
    body = []
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if line.startswith("spec "):
            name = line.split()[1]
            j = i + 1
            eq_lines = []
            while j < len(lines) and lines[j].strip() != "end":
                eq_lines.append(lines[j])
                j += 1
            if j == len(lines):
                raise SyntaxError("spec block without 'end'", SourceSpan(i + 1, 1))
            specs[name] = parse_spec("\n".join(eq_lines), config, name, specs)
            i = j + 1
            continue
        body.append(lines[i])
        i += 1
    return parse_term("\n".join(body), config, specs), specs


def _items(line):
    return [x for x in re.split(r"[\s,]+", line) if x]


def load_config(text):
    """Read ``[alphabet] [gamma] [conflict] [causality] [mode]`` sections.

    gamma lines read ``a b -> c``; conflict lines ``a b``; causality lines
    ``b c`` meaning b ≤ c; ``#`` starts a comment.
    """
    sections = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[(\w+)\]", line)
        if m:
            current = m.group(1)
            if current not in ("alphabet", "gamma", "conflict", "causality", "mode"):
                raise ConfigError("unknown section [%s]" % current, current)
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ConfigError("content before the first section", "config")
        sections[current].append(line)
    alphabet = []
    for line in sections.get("alphabet", []):
        alphabet.extend(_items(line))
    gamma = {}
    for line in sections.get("gamma", []):
        m = re.fullmatch(r"(\S+)\s*[,\s]\s*(\S+)\s*->\s*(\S+)", line)
        if not m:
            raise ConfigError("bad gamma entry %r" % line, "gamma")
        a, b, c = m.groups()
        if (a, b) in gamma and gamma[(a, b)] != c:
            raise ConfigError("gamma(%s,%s) defined twice" % (a, b), "gamma")
        gamma[(a, b)] = c
    pairs = {}
    for sec in ("conflict", "causality"):
        pairs[sec] = []
        for line in sections.get(sec, []):
            it = _items(line)
            if len(it) != 2:
                raise ConfigError("expected a pair, got %r" % line, sec)
            pairs[sec].append(tuple(it))
    mode_lines = sections.get("mode", ["drt"])
    mode = mode_lines[0].strip() if mode_lines else "drt"
    return T.AlgebraConfig.make(alphabet, gamma, pairs["conflict"], pairs["causality"], mode)


def dump_config(config):
    """Text form of a configuration accepted by :func:`load_config`."""
    out = ["[mode]", config.mode, "[alphabet]", " ".join(sorted(config.alphabet)), "[gamma]"]
    seen = set()
    for (a, b), c in config.gamma:
        if (b, a) in seen:
            continue
        seen.add((a, b))
        out.append("%s %s -> %s" % (a, b, c))
    out.append("[conflict]")
    for a, b in sorted(config.conflict):
        if a < b:
            out.append("%s %s" % (a, b))
    out.append("[causality]")
    for a, b in sorted(config.causality):
        out.append("%s %s" % (a, b))
    return "\n".join(out) + "\n"


pretty_print = T.pretty
