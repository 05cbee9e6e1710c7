"""Random walks and state-dependent Markov chains with bounded jumps."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cayley import ball
from .groups import GroupSpec, Word, multiply, normal_form, parse_word, push_letter

PROB_TOL = 1e-12


class BoundedJumpsViolation(ValueError):
    def __init__(self, word, bound):
        super().__init__(f"support word {word} lies outside ball(1, {bound})")
        self.word = word
        self.bound = bound


@dataclass(frozen=True)
class StepLaw:
    support: tuple  # of (Word, float) pairs

    def __post_init__(self):
        if not self.support:
            raise ValueError("empty step law")
        probs = [p for _, p in self.support]
        if min(probs) <= 0:
            raise ValueError("step probabilities must be positive")
        if abs(sum(probs) - 1.0) > PROB_TOL:
            raise ValueError(f"step probabilities sum to {sum(probs)!r}, not 1")

    @classmethod
    def uniform(cls, words) -> "StepLaw":
        words = list(words)
        return cls(tuple((tuple(w), 1.0 / len(words)) for w in words))

    @property
    def words(self) -> list:
        return [w for w, _ in self.support]

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.support])


def _length_parity(w: Word) -> int:
    return len(w) & 1


def _constant(w: Word) -> int:
    return 0


CLASSIFIERS = {"parity": _length_parity, "constant": _constant}


@dataclass(frozen=True)
class Kernel:
    """Transition law: one StepLaw per state class.

    An IID walk is the single-class case (classifier ``constant``).
    """

    laws: tuple
    classifier: str = "constant"
    name: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.classifier not in CLASSIFIERS:
            raise ValueError(f"unknown classifier {self.classifier!r}")
        if self.classifier == "parity" and len(self.laws) != 2:
            raise ValueError("parity kernel needs exactly two laws")

    @property
    def is_iid(self) -> bool:
        return len(self.laws) == 1

    def law_at(self, w: Word) -> StepLaw:
        return self.laws[CLASSIFIERS[self.classifier](w)]

    def jump_bound(self, spec: GroupSpec) -> int:
        return max(len(normal_form(s, spec)) for law in self.laws for s in law.words)

    def describe(self) -> dict:
        return {"type": self.name, **self.params}


@dataclass(frozen=True)
class Trajectory:
    start: Word
    states: tuple
    seed: int

    @property
    def end(self) -> Word:
        return self.states[-1]

    def __len__(self):
        return len(self.states) - 1


# --- constructors ----------------------------------------------------------

def srw(spec: GroupSpec) -> Kernel:
    """Simple random walk: uniform on the 2k generator letters."""
    return Kernel((StepLaw.uniform((s,) for s in spec.letters),), name="srw")


def lazy(spec: GroupSpec, p: float = 0.5) -> Kernel:
    """Stay put with probability ``p``, else take a uniform generator step."""
    if not 0 < p < 1:
        raise ValueError("laziness must lie in (0, 1)")
    q = (1 - p) / (2 * spec.rank)
    law = StepLaw((((), p),) + tuple(((s,), q) for s in spec.letters))
    return Kernel((law,), name="lazy", params={"p": p})


def parity(spec: GroupSpec, even: StepLaw, odd: StepLaw) -> Kernel:
    """Law chosen by the parity of the current word length."""
    return Kernel((even, odd), classifier="parity", name="parity")


def builtin_kernels(spec: GroupSpec) -> dict:
    gens = [(s,) for s in spec.letters]
    return {
        "srw": srw(spec),
        "lazy": lambda p=0.5: lazy(spec, p),
        "parity": lambda even=None, odd=None: parity(
            spec, even or StepLaw.uniform(gens), odd or StepLaw.uniform(gens)),
    }


def kernel_from_config(doc: dict, spec: GroupSpec) -> Kernel:
    """``{"type": "srw"}``, ``{"type": "lazy", "p": 0.5}`` or
    ``{"type": "parity", "even": [[word, prob], ...], "odd": [...]}``.

    Parity laws given as a plain list of words are uniform on those words.
    """
    kind = doc.get("type", "srw")
    if kind == "srw":
        return srw(spec)
    if kind == "lazy":
        return lazy(spec, float(doc.get("p", 0.5)))
    if kind == "parity":
        def law(items):
            if items is None:
                return StepLaw.uniform((s,) for s in spec.letters)
            if all(isinstance(it, str) for it in items):
                return StepLaw.uniform(parse_word(it, spec) for it in items)
            return StepLaw(tuple((parse_word(w, spec), float(Fraction(str(p)))) for w, p in items))
        k = parity(spec, law(doc.get("even")), law(doc.get("odd")))
        return Kernel(k.laws, k.classifier, "parity",
                      {"even": doc.get("even"), "odd": doc.get("odd")})
    raise ValueError(f"unknown kernel type {kind!r}")


# --- seeding and sampling --------------------------------------------------

def trial_seed(base_seed: int, trial_index: int, stream: int = 0) -> int:
    """Deterministic 64-bit seed for one trial, independent of scheduling."""
    ss = np.random.SeedSequence(entropy=int(base_seed), spawn_key=(int(trial_index), int(stream)))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng_from_seed(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=int(seed)))


def sample_path(kernel: Kernel, start: Word, n: int, seed: int, spec: GroupSpec) -> Trajectory:
    rng = rng_from_seed(seed)
    start = normal_form(start, spec)
    cur = list(start)
    states = [start]
    if n == 0:
        return Trajectory(start, tuple(states), seed)
    if kernel.is_iid:
        law = kernel.laws[0]
        steps = rng.choice(len(law.support), size=n, p=law.probs)
        words = law.words
        for i in steps:
            for x in words[i]:
                push_letter(cur, x, spec)
            states.append(tuple(cur))
    else:
        cdfs = [np.cumsum(law.probs) for law in kernel.laws]
        classify = CLASSIFIERS[kernel.classifier]
        us = rng.random(n)
        for u in us:
            c = classify(cur)
            i = min(int(np.searchsorted(cdfs[c], u, side="right")), len(cdfs[c]) - 1)
            for x in kernel.laws[c].words[i]:
                push_letter(cur, x, spec)
            states.append(tuple(cur))
    return Trajectory(start, tuple(states), seed)


def sample_endpoint(kernel: Kernel, start: Word, n: int, seed: int, spec: GroupSpec) -> Word:
    return sample_path(kernel, start, n, seed, spec).end


# --- validation ------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    jump_bound: int
    bounded_jumps_ok: bool
    horizon: int
    eps_hat: dict  # letter -> min over sampled states of max_k P[w^g_k = g s]
    states_checked: int

    @property
    def irreducible(self) -> bool:
        return all(v > 0 for v in self.eps_hat.values())


def validate_kernel(kernel: Kernel, spec: GroupSpec, sample_points: int = 20,
                    horizon: int = 1, jump_bound: int | None = None,
                    seed: int = 0) -> ValidationReport:
    """Check bounded jumps exactly and estimate irreducibility constants.

    For each generator letter ``s`` and each sampled state ``g`` from
    ``ball(1, 6)``, the law of ``w^g_k`` is expanded exactly for
    ``k <= horizon`` and the best ``P[w^g_k = g s]`` is kept; the report holds
    the minimum over states.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    K = kernel.jump_bound(spec) if jump_bound is None else jump_bound
    for law in kernel.laws:
        for w in law.words:
            if len(normal_form(w, spec)) > K:
                raise BoundedJumpsViolation(w, K)
    pool = list(ball((), 6, spec).members)
    if sample_points >= len(pool):
        states = pool
    else:
        # identity and one generator pin both length parities into the sample
        rng = np.random.default_rng(seed)
        rest = rng.choice(np.arange(2, len(pool)), size=max(sample_points - 2, 0), replace=False)
        states = pool[:2] + [pool[i] for i in sorted(rest)]
    eps = {s: 1.0 for s in spec.letters}
    for g in states:
        dist = {g: 1.0}
        best = {s: 0.0 for s in spec.letters}
        targets = {multiply(g, (s,), spec): s for s in spec.letters}
        for _ in range(horizon):
            nxt: dict = {}
            for h, p in dist.items():
                for w, q in kernel.law_at(h).support:
                    hw = multiply(h, w, spec)
                    nxt[hw] = nxt.get(hw, 0.0) + p * q
            dist = nxt
            for t, s in targets.items():
                best[s] = max(best[s], dist.get(t, 0.0))
        for s in spec.letters:
            eps[s] = min(eps[s], best[s])
    return ValidationReport(K, True, horizon, eps, len(states))
