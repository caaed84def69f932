"""Top level: words over X for arbitrary elements of SL(n, K), with a length ledger."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import Matrix, unit_vector
from ..transvection import PreconditionError
from .closure import StageFailure
from .elements import Elem
from .genset import GenSet, word_evaluate
from .stages import SL, STAGE_NAMES, TT, Stages
from .synth import gauss_decompose, synth_transvection
from .words import EMPTY, Word, cat_list

GAUSS_C = 2  # at most n^2 + n <= 2 n^2 elementary factors


@dataclass
class StageLedger:
    stages: list = field(default_factory=list)
    total_length: int = 0
    gauss_ops: int = 0
    cases: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "stages": self.stages,
            "total_length": self.total_length,
            "gauss_ops": self.gauss_ops,
            "gauss_constant": GAUSS_C,
            "cases": dict(sorted(self.cases.items())),
            "flags": self.flags,
        }

    def bound_holds(self) -> bool:
        return all(s["max_length"] <= s["bound"] for s in self.stages)


@dataclass
class Decomposition:
    word: Word
    factors: list
    ledger: StageLedger
    pipeline: "Pipeline"

    @property
    def length(self) -> int:
        return self.word.length

    def verify(self, g: Matrix) -> bool:
        return word_evaluate(self.word, self.pipeline.X) == g


class Pipeline:
    """Stages for one generating set; decompositions reuse all oracles."""

    def __init__(self, X: GenSet, cap_rounds: int | None = None, cap_elements: int = 50_000):
        if X.n < 3:
            raise PreconditionError("the staged construction needs n >= 3")
        self.X = X
        self.F = X.field
        self.n = X.n
        self.stages = Stages(X, cap_rounds=cap_rounds, cap_elements=cap_elements)
        self._elementary: dict = {}

    def elementary(self, i: int, j: int) -> Elem:
        """Element for the group of 1 + E_ij, based exactly at 1 + E_ij."""
        e = self._elementary.get((i, j))
        if e is None:
            F, n = self.F, self.n
            e, _ = synth_transvection(self.stages, unit_vector(F, n, i), unit_vector(F, n, j))
            self._elementary[(i, j)] = e
        return e

    def supplier(self, i: int, j: int, c) -> Word:
        return self.elementary(i, j).word(c)

    def transvection_word(self, v, phi) -> Word:
        e, _ = synth_transvection(self.stages, v, phi)
        return e.word(1)

    def decompose(self, g: Matrix) -> Decomposition:
        if g.field != self.F or g.n != self.n:
            raise PreconditionError("target has the wrong field or dimension")
        if g.det() != self.F.one:
            raise PreconditionError("target must have det = 1")
        if g.is_identity():
            return Decomposition(EMPTY, [], self.ledger(EMPTY, 0), self)
        for w, m in self.X.symbols():
            if m == g:
                return Decomposition(w, [], self.ledger(w, 0), self)
        words, factors = gauss_decompose(g, self.supplier)
        word = cat_list(words)
        return Decomposition(word, factors, self.ledger(word, len(factors)), self)

    # ledger ---------------------------------------------------------------

    def _lambdas(self, e: Elem):
        F = self.F
        if F.p is not None:
            return list(F.units())
        return [F.one] + [k for k in e._memo if k != 0]

    def ledger(self, word: Word, nfactors: int) -> StageLedger:
        st = self.stages
        L = StageLedger()
        prev_max = 0
        bound = None
        for j, name in enumerate(STAGE_NAMES[:-1]):
            elems = st.by_stage[j]
            if j == TT:
                elems = list(elems) + list(self._elementary.values())
            mx = max((e.word(lam).length for e in elems for lam in self._lambdas(e)), default=0)
            stage_max = max(prev_max, mx)
            if j == 0:
                ratio = stage_max
                bound = stage_max
            else:
                ratio = max((e.cost_over(j - 1) for e in elems), default=1)
                bound = bound * max(ratio, 1)
            L.stages.append({
                "name": name,
                "groups": len({e.t.group for e in elems}),
                "max_length": stage_max,
                "ratio": ratio,
                "bound": bound,
            })
            prev_max = stage_max
        L.stages.append({
            "name": STAGE_NAMES[SL],
            "groups": None,
            "max_length": word.length,
            "ratio": nfactors,
            "bound": bound * max(nfactors, 1),
        })
        L.total_length = word.length
        L.gauss_ops = nfactors
        L.cases = dict(st.cases)
        y4 = L.stages[4]["max_length"] or 1
        L.flags = {
            "y5_over_y4_ratio": L.stages[5]["ratio"],
            "n6": self.n ** 6,
            "y5_ratio_within_n6": L.stages[5]["ratio"] <= self.n ** 6,
            "y4_max_length": y4,
        }
        return L


def decompose(g: Matrix, X: GenSet, **kwargs) -> Decomposition:
    return Pipeline(X, **kwargs).decompose(g)


__all__ = ["Pipeline", "Decomposition", "StageLedger", "StageFailure", "decompose"]
