"""Fixed test corpus of ten seeded trigonometric polynomials.

Bandwidths run from 1 to 4, peak mode amplitudes from 0.1 to 1.0, and the
parities cycle through even (cosines only), odd (sines only) and mixed.  The
default corpus is committed as package data; other seeds regenerate it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .potential import Potential

__all__ = ["DEFAULT_SEED", "CorpusMember", "generate_corpus", "load_corpus", "corpus", "corpus_json"]

DEFAULT_SEED = 1729
SIZE = 10
BANDWIDTHS = (1, 1, 2, 2, 2, 3, 3, 4, 4, 4)
PARITIES = ("even", "odd", "mixed")
DATA_FILE = "corpus.json"


@dataclass(frozen=True)
class CorpusMember:
    name: str
    bandwidth: int
    amplitude: float
    parity: str
    potential: Potential

    def scaled(self, factor: float) -> "CorpusMember":
        return CorpusMember(self.name, self.bandwidth, self.amplitude * factor, self.parity,
                            self.potential.scaled(factor))

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "bandwidth": self.bandwidth,
            "amplitude": self.amplitude,
            "parity": self.parity,
            "potential": self.potential.to_json_dict(),
        }


def generate_corpus(seed: int = DEFAULT_SEED) -> list[CorpusMember]:
    rng = np.random.default_rng(seed)
    amplitudes = rng.permutation(np.round(np.linspace(0.1, 1.0, SIZE), 6))
    members = []
    for i, (bw, amp) in enumerate(zip(BANDWIDTHS, amplitudes)):
        parity = PARITIES[i % 3]
        radius = rng.uniform(0.3, 1.0, bw)
        radius[-1] = max(radius[-1], 0.5)  # keep the top mode visible
        phase = rng.uniform(0.0, 2.0 * np.pi, bw)
        if parity == "even":
            a, b = radius * np.sign(np.cos(phase)), np.zeros(bw)
        elif parity == "odd":
            a, b = np.zeros(bw), radius * np.sign(np.sin(phase))
        else:
            a, b = radius * np.cos(phase), radius * np.sin(phase)
        scale = amp / np.max(np.hypot(a, b))
        modes = {n + 1: (round(float(a[n] * scale), 6), round(float(b[n] * scale), 6)) for n in range(bw)}
        members.append(CorpusMember(f"c{i:02d}-bw{bw}-{parity}", bw, float(amp), parity, Potential(modes)))
    return members


def corpus_json(members: list[CorpusMember], seed: int) -> str:
    doc = {"seed": seed, "members": [m.to_json_dict() for m in members]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_corpus() -> list[CorpusMember]:
    text = resources.files("kdvactions").joinpath("data", DATA_FILE).read_text()
    doc = json.loads(text)
    return [
        CorpusMember(m["name"], int(m["bandwidth"]), float(m["amplitude"]), m["parity"],
                     Potential.from_json_dict(m["potential"]))
        for m in doc["members"]
    ]


def corpus(seed: int | None = None) -> list[CorpusMember]:
    """The committed corpus, or a regenerated one for a non-default ``seed``."""
    if seed is None or seed == DEFAULT_SEED:
        return load_corpus()
    return generate_corpus(seed)
