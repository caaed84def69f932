"""Generating sets X and word evaluation over them."""
from __future__ import annotations

import json

from ..algebra import Field, Matrix
from ..transvection import Transvection, TransvectionGroup, recognize
from .words import EMPTY, LeafTable, Word, WordError, evaluate


class GenSetError(ValueError):
    pass


class GenSet:
    """Generators of SL(n, K), implicitly symmetric and containing 1.

    ``group`` marks a whole transvection group contained in X; its members
    are single symbols of cost 1 (``atom`` leaves).
    """

    def __init__(self, generators, group: TransvectionGroup | None = None, distinguished: int | None = None):
        gens = list(generators)
        if not gens and group is None:
            raise GenSetError("empty generating set")
        ref = gens[0] if gens else group.base.matrix
        self.field: Field = ref.field
        self.n: int = ref.n
        for g in gens:
            if g.field != self.field or g.n != self.n:
                raise GenSetError("generators must share field and dimension")
            if g.det() != self.field.one:
                raise GenSetError("generator with det != 1")
        self.mats: list[Matrix] = gens
        self.inv_mats: list[Matrix] = [g.inverse() for g in gens]
        self.group = group
        self._gens = LeafTable("gen")
        self._atoms = LeafTable("atom")
        self.transvections = [recognize(g) for g in gens]
        if distinguished is None:
            distinguished = next(
                (i for i, t in enumerate(self.transvections) if isinstance(t, Transvection)), None
            )
        elif not isinstance(self.transvections[distinguished], Transvection):
            raise GenSetError("distinguished generator is not a transvection")
        self.distinguished = distinguished
        if group is None and distinguished is None:
            raise GenSetError("X must contain a transvection")

    def __len__(self):
        return len(self.mats)

    def gen(self, i: int, exp: int = 1) -> Word:
        if not 0 <= i < len(self.mats) or exp not in (1, -1):
            raise WordError(f"invalid generator reference ({i}, {exp})")
        return self._gens.get(i, exp, -exp)

    def atom(self, lam) -> Word:
        if self.group is None:
            raise WordError("X contains no whole transvection group")
        F = self.field
        lam = F.coerce(lam)
        if lam == 0:
            return EMPTY
        return self._atoms.get(None, lam, F.neg(lam))

    def symbols(self):
        """All words of length one over X and X^-1 (with their matrices)."""
        for i in range(len(self.mats)):
            yield self.gen(i, 1), self.mats[i]
            yield self.gen(i, -1), self.inv_mats[i]

    def leaf_matrix(self, leaf: Word) -> Matrix:
        if leaf.op == "gen":
            if not 0 <= leaf.index < len(self.mats):
                raise WordError(f"generator index {leaf.index} out of range")
            return self.mats[leaf.index] if leaf.exp == 1 else self.inv_mats[leaf.index]
        if leaf.op == "atom":
            if self.group is None:
                raise WordError("atom used but X has no whole group")
            return self.group.member(leaf.exp).matrix
        raise WordError(f"leaf {leaf.op} is not a symbol of X")

    def to_json(self) -> dict:
        F = self.field
        out = {
            "field": F.to_json(),
            "n": self.n,
            "generators": [[[F.dump(a) for a in r] for r in g.rows] for g in self.mats],
        }
        if self.group is not None:
            out["group"] = self.group.to_json()
        if self.distinguished is not None:
            out["distinguished"] = self.distinguished
        return out

    @staticmethod
    def from_json(obj) -> "GenSet":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            F = Field.from_json(obj["field"])
            gens = [Matrix(F, [[F.coerce(a) for a in r] for r in rows]) for rows in obj["generators"]]
            group = None
            if obj.get("group") is not None:
                group = Transvection.from_json(obj["group"], F).group
            return GenSet(gens, group=group, distinguished=obj.get("distinguished"))
        except (KeyError, TypeError) as exc:
            raise GenSetError(f"malformed generating set: {exc}") from exc


def word_evaluate(w: Word, X: GenSet) -> Matrix:
    """Exact product of the expanded word over X (memoized over the DAG)."""
    return evaluate(w, X.leaf_matrix, X.field, X.n)
