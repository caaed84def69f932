"""Straight-line-program words over a generating set.

A word is a DAG of nodes: generator symbols, whole-group members (cost 1
when the group lies inside X), symbolic letters (used to count lengths over
an auxiliary set), concatenations and formal inverses.  Lengths are computed
at construction; matrices are only produced on demand.

Inverses are canonical (``w.inverse().inverse() is w``), which lets
concatenation cancel ``u u^-1`` by object identity.
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from ..algebra import Field, Matrix


class WordError(ValueError):
    pass


class Word:
    __slots__ = ("op", "index", "exp", "args", "payload", "length", "_inv", "__weakref__")

    def __init__(self, op, length, index=None, exp=None, args=(), payload=None):
        self.op = op
        self.index = index
        self.exp = exp
        self.args = args
        self.payload = payload
        self.length = length
        self._inv = None

    # construction ------------------------------------------------------

    def inverse(self) -> "Word":
        if self._inv is None:
            if self.op == "id":
                inv = self
            else:
                inv = Word("inv", self.length, args=(self,))
            inv._inv = self
            self._inv = inv
        return self._inv

    def __len__(self):
        return self.length

    def __repr__(self):
        if self.op == "gen":
            return f"g{self.index}{'' if self.exp == 1 else '^-1'}"
        if self.op in ("atom", "sym"):
            return f"{self.op}({self.index},{self.exp})"
        if self.op == "id":
            return "1"
        if self.op == "inv":
            return f"({self.args[0]!r})^-1"
        if self.length <= 12:
            return " ".join(repr(a) for a in self.args)
        return f"<word len={self.length}>"

    # traversal -----------------------------------------------------------

    def leaves(self) -> Iterable["Word"]:
        """Expanded leaf sequence (inverted leaves for inverted subtrees)."""
        stack = [(self, False)]
        while stack:
            w, neg = stack.pop()
            if w.op == "cat":
                kids = w.args if neg else w.args[::-1]
                stack.extend((a, neg) for a in kids)
            elif w.op == "inv":
                stack.append((w.args[0], not neg))
            elif w.op == "id":
                continue
            else:
                yield w.inverse() if neg else w

    def nodes(self) -> list["Word"]:
        """Distinct nodes in topological order (children first)."""
        order, seen = [], set()
        stack = [(self, False)]
        while stack:
            w, done = stack.pop()
            if id(w) in seen:
                continue
            if done:
                seen.add(id(w))
                order.append(w)
                continue
            stack.append((w, True))
            for a in w.args:
                if id(a) not in seen:
                    stack.append((a, False))
        return order


EMPTY = Word("id", 0)


def _leaf(op, index, exp, payload=None, length=1) -> Word:
    return Word(op, length, index=index, exp=exp, payload=payload)


class LeafTable:
    """Canonical leaves, so that inverse pairs are identical objects."""

    def __init__(self, op: str):
        self.op = op
        self._cache: dict = {}

    def get(self, index, exp, neg_exp, payload=None, inv_payload=None) -> Word:
        key = (index, exp)
        w = self._cache.get(key)
        if w is None:
            w = _leaf(self.op, index, exp, payload)
            wi = _leaf(self.op, index, neg_exp, inv_payload)
            w._inv, wi._inv = wi, w
            self._cache[key] = w
            self._cache[(index, neg_exp)] = wi
        return w


# cancellation ------------------------------------------------------------


def _front_chain(w: Word) -> list[Word]:
    chain = [w]
    while w.op == "cat":
        w = w.args[0]
        chain.append(w)
    return chain


def _back_chain(w: Word) -> list[Word]:
    chain = [w]
    while w.op == "cat":
        w = w.args[-1]
        chain.append(w)
    return chain


def _drop_front(w: Word, depth: int) -> Word:
    """w without the prefix found ``depth`` levels down its front chain."""
    if depth == 0:
        return EMPTY
    head = _drop_front(w.args[0], depth - 1)
    return _raw_cat([head] + list(w.args[1:]))


def _drop_back(w: Word, depth: int) -> Word:
    if depth == 0:
        return EMPTY
    tail = _drop_back(w.args[-1], depth - 1)
    return _raw_cat(list(w.args[:-1]) + [tail])


def _raw_cat(parts: list[Word]) -> Word:
    parts = [p for p in parts if p.op != "id"]
    if not parts:
        return EMPTY
    if len(parts) == 1:
        return parts[0]
    return Word("cat", sum(p.length for p in parts), args=tuple(parts))


def _try_cancel(u: Word, w: Word):
    """Cancel a trailing piece of u against a leading piece of w, if any."""
    back = _back_chain(u)
    front = _front_chain(w)
    pos = {id(f.inverse()): j for j, f in enumerate(front)}
    for i, b in enumerate(back):
        j = pos.get(id(b))
        if j is not None:
            return _drop_back(u, i), _drop_front(w, j)
    return None


def cat(*parts: Word) -> Word:
    return cat_list(parts)


def cat_list(parts: Sequence[Word]) -> Word:
    """Concatenate with free cancellation of adjacent inverse pieces."""
    stack: list[Word] = []
    for w in parts:
        while w.op != "id" and stack:
            r = _try_cancel(stack[-1], w)
            if r is None:
                break
            u, w = r
            stack.pop()
            if u.op != "id":
                stack.append(u)
        if w.op != "id":
            stack.append(w)
    return _raw_cat(stack)


def repeat(w: Word, m: int) -> Word:
    """w^m for an integer m >= 0, by binary doubling (shared nodes)."""
    if m < 0:
        return repeat(w.inverse(), -m)
    result = EMPTY
    base = w
    while m:
        if m & 1:
            result = _raw_cat([result, base])
        m >>= 1
        if m:
            base = _raw_cat([base, base])
    return result


def commutator(a: Word, b: Word) -> Word:
    return cat(a, b, a.inverse(), b.inverse())


def conjugate_word(g: Word, x: Word) -> Word:
    return cat(g, x, g.inverse())


# evaluation ----------------------------------------------------------------


def evaluate(w: Word, leaf_matrix: Callable[[Word], Matrix], field: Field, n: int) -> Matrix:
    """Exact product of the expanded word, memoized over the DAG."""
    memo: dict[int, Matrix] = {}
    memo_inv: dict[int, Matrix] = {}
    ident = Matrix.identity(field, n)

    def inv_of(node: Word) -> Matrix:
        key = id(node)
        m = memo_inv.get(key)
        if m is None:
            m = memo[key].inverse()
            memo_inv[key] = m
        return m

    for node in w.nodes():
        if node.op == "id":
            m = ident
        elif node.op == "cat":
            m = memo[id(node.args[0])]
            for a in node.args[1:]:
                m = m @ memo[id(a)]
        elif node.op == "inv":
            m = inv_of(node.args[0])
        else:
            m = leaf_matrix(node)
        memo[id(node)] = m
    return memo[id(w)]


def naive_evaluate(w: Word, leaf_matrix: Callable[[Word], Matrix], field: Field, n: int) -> Matrix:
    """Left-to-right product over the expanded leaves (test oracle)."""
    m = Matrix.identity(field, n)
    for leaf in w.leaves():
        m = m @ leaf_matrix(leaf)
    return m


# serialization -------------------------------------------------------------


def word_to_json(w: Word, field: Field) -> dict:
    nodes = w.nodes()
    index = {id(x): i for i, x in enumerate(nodes)}
    out = []
    for x in nodes:
        if x.op == "gen":
            out.append({"op": "gen", "index": x.index, "exp": x.exp})
        elif x.op == "atom":
            out.append({"op": "atom", "lam": field.dump(x.exp)})
        elif x.op == "cat":
            out.append({"op": "cat", "args": [index[id(a)] for a in x.args]})
        elif x.op == "inv":
            out.append({"op": "inv", "arg": index[id(x.args[0])]})
        elif x.op == "id":
            out.append({"op": "id"})
        else:
            raise WordError(f"cannot serialize {x.op} node")
    return {"nodes": out, "root": index[id(w)], "length": w.length}


def word_from_json(obj: dict, genset) -> Word:
    built: list[Word] = []
    F = genset.field
    for node in obj["nodes"]:
        op = node.get("op")
        if op == "gen":
            built.append(genset.gen(int(node["index"]), int(node["exp"])))
        elif op == "atom":
            built.append(genset.atom(F.coerce(node["lam"])))
        elif op == "cat":
            built.append(_raw_cat([built[i] for i in node["args"]]))
        elif op == "inv":
            built.append(built[node["arg"]].inverse())
        elif op == "id":
            built.append(EMPTY)
        else:
            raise WordError(f"unknown node op {op!r}")
    return built[obj["root"]]
