"""A deliberately tiny regex dialect for writing fixtures.

Grammar (whitespace is ignored)::

    alt    := concat ('|' concat)*
    concat := repeat*
    repeat := atom ('*' | '+' | '?')*
    atom   := letter | '%e' | '%0' | '(' alt ')'

``%e`` is the empty word and ``%0`` the empty language.  An empty branch,
as in ``(a|)``, also denotes the empty word.

Compilation uses the Glushkov position automaton, so no epsilon transitions
are ever created; inaccessible positions (those behind ``%0``) are removed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Nfa, accessible, make_alphabet


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class _Node:
    nullable: bool
    first: frozenset[int]
    last: frozenset[int]
    empty: bool  # denotes the empty language


class _Parser:
    def __init__(self, text: str, alphabet: tuple[str, ...]):
        self.tokens = [(i, ch) for i, ch in enumerate(text) if not ch.isspace()]
        self.pos = 0
        self.alphabet = set(alphabet)
        self.letters: list[str] = []  # letter of each Glushkov position
        self.follow: dict[int, set[int]] = {}
        self.end = len(text)

    def peek(self) -> str | None:
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def where(self) -> int:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else self.end

    def take(self) -> str:
        ch = self.tokens[self.pos][1]
        self.pos += 1
        return ch

    def _link(self, sources, targets):
        for p in sources:
            self.follow[p].update(targets)

    def parse(self) -> _Node:
        node = self.alt()
        if self.peek() is not None:
            raise RegexSyntaxError(f"unexpected {self.peek()!r}", self.where())
        return node

    def alt(self) -> _Node:
        node = self.concat()
        while self.peek() == "|":
            self.take()
            rhs = self.concat()
            node = _Node(
                node.nullable or rhs.nullable,
                node.first | rhs.first,
                node.last | rhs.last,
                node.empty and rhs.empty,
            )
        return node

    def concat(self) -> _Node:
        node = _Node(True, frozenset(), frozenset(), False)
        while self.peek() is not None and self.peek() not in "|)":
            rhs = self.repeat()
            self._link(node.last, rhs.first)
            node = _Node(
                node.nullable and rhs.nullable,
                node.first | (rhs.first if node.nullable else frozenset()),
                rhs.last | (node.last if rhs.nullable else frozenset()),
                node.empty or rhs.empty,
            )
        if node.empty:
            return _Node(False, frozenset(), frozenset(), True)
        return node

    def repeat(self) -> _Node:
        node = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.take()
            if op in "*+":
                self._link(node.last, node.first)
            if op in "*?":
                node = _Node(True, node.first, node.last, False)
        return node

    def atom(self) -> _Node:
        at = self.where()
        ch = self.peek()
        if ch is None:
            raise RegexSyntaxError("unexpected end of input", at)
        if ch == "(":
            self.take()
            node = self.alt()
            if self.peek() != ")":
                raise RegexSyntaxError("missing ')'", self.where())
            self.take()
            return node
        if ch == "%":
            self.take()
            nxt = self.peek()
            if nxt == "e":
                self.take()
                return _Node(True, frozenset(), frozenset(), False)
            if nxt == "0":
                self.take()
                return _Node(False, frozenset(), frozenset(), True)
            raise RegexSyntaxError("expected %e or %0", at)
        if ch in "*+?|)":
            raise RegexSyntaxError(f"unexpected {ch!r}", at)
        if ch not in self.alphabet:
            raise RegexSyntaxError(f"letter {ch!r} not in alphabet", at)
        self.take()
        p = len(self.letters)
        self.letters.append(ch)
        self.follow[p] = set()
        single = frozenset({p})
        return _Node(False, single, single, False)


def parse_regex(text: str, alphabet) -> Nfa:
    """Compile ``text`` to an NFA over ``alphabet`` whose states are all accessible."""
    alphabet = make_alphabet(alphabet)
    parser = _Parser(text, alphabet)
    root = parser.parse()
    # state 0 is the initial state, position p becomes state p + 1
    n = len(parser.letters) + 1
    trans = {(0, parser.letters[p], p + 1) for p in root.first}
    for p, targets in parser.follow.items():
        for q in targets:
            trans.add((p + 1, parser.letters[q], q + 1))
    final = {p + 1 for p in root.last}
    if root.nullable:
        final.add(0)
    if root.empty:
        trans, final = set(), set()
    nfa = Nfa(alphabet, n, frozenset(trans), frozenset({0}), frozenset(final))
    return accessible(nfa)
