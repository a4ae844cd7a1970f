"""Time series of hub-arrival probability and the two feeding amplitudes.

A trace row holds the step index, the probability of measuring the hub, and
the two collapsed amplitudes on arcs arriving at the hub (from the clique
and from the star).  Serialization keeps 17 significant digits so that a
parse of an emitted file reproduces the in-memory arrays bit for bit.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

COLUMNS = (
    "t",
    "p_vstar",
    "re_psi_clique_in",
    "im_psi_clique_in",
    "re_psi_star_in",
    "im_psi_star_in",
)

_P_SLACK = 1e-9  # tolerated floating-point overshoot outside [0, 1]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True, eq=False)
class ProbabilityTrace:
    """Hub probability trace with its two component amplitudes.

    ``metadata`` is an ordered mapping of string keys to string values; it
    travels verbatim through CSV (`# key=value` header lines) and JSON.
    """

    times: np.ndarray             # int64, shape (T,)
    p_hub: np.ndarray             # float64, shape (T,)
    psi_clique_in: np.ndarray     # complex128, shape (T,)
    psi_star_in: np.ndarray       # complex128, shape (T,)
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("p_hub", "psi_clique_in", "psi_star_in"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} length differs from times")
        if n and (self.p_hub.min() < -_P_SLACK or self.p_hub.max() > 1 + _P_SLACK):
            raise ValueError("p_vstar outside [0, 1]")

    def __len__(self) -> int:
        return len(self.times)

    # ---- CSV ----

    def to_csv(self, stream: io.TextIOBase) -> None:
        for key, value in self.metadata.items():
            stream.write(f"# {key}={value}\n")
        stream.write(",".join(COLUMNS) + "\n")
        for i in range(len(self)):
            row = (
                str(int(self.times[i])),
                _fmt(self.p_hub[i]),
                _fmt(self.psi_clique_in[i].real),
                _fmt(self.psi_clique_in[i].imag),
                _fmt(self.psi_star_in[i].real),
                _fmt(self.psi_star_in[i].imag),
            )
            stream.write(",".join(row) + "\n")

    @classmethod
    def from_csv(cls, stream: io.TextIOBase) -> "ProbabilityTrace":
        metadata: dict[str, str] = {}
        header: list[str] | None = None
        rows: list[list[str]] = []
        for line in stream:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                metadata[key.strip()] = value
                continue
            if header is None:
                header = line.split(",")
                if tuple(header) != COLUMNS:
                    raise ValueError(f"unexpected columns {header}")
                continue
            rows.append(line.split(","))
        if header is None:
            raise ValueError("missing column header")
        cols = list(zip(*rows)) if rows else [[] for _ in COLUMNS]
        return cls(
            times=np.asarray([int(v) for v in cols[0]], dtype=np.int64),
            p_hub=np.asarray([float(v) for v in cols[1]], dtype=np.float64),
            psi_clique_in=np.asarray(
                [complex(float(r), float(i)) for r, i in zip(cols[2], cols[3])]
            ),
            psi_star_in=np.asarray(
                [complex(float(r), float(i)) for r, i in zip(cols[4], cols[5])]
            ),
            metadata=metadata,
        )

    # ---- JSON ----

    def to_json(self, stream: io.TextIOBase) -> None:
        payload = {
            "metadata": dict(self.metadata),
            "columns": {
                "t": [int(v) for v in self.times],
                "p_vstar": [float(v) for v in self.p_hub],
                "re_psi_clique_in": [float(v) for v in self.psi_clique_in.real],
                "im_psi_clique_in": [float(v) for v in self.psi_clique_in.imag],
                "re_psi_star_in": [float(v) for v in self.psi_star_in.real],
                "im_psi_star_in": [float(v) for v in self.psi_star_in.imag],
            },
        }
        json.dump(payload, stream, indent=1)
        stream.write("\n")

    @classmethod
    def from_json(cls, stream: io.TextIOBase) -> "ProbabilityTrace":
        payload = json.load(stream)
        cols = payload["columns"]
        return cls(
            times=np.asarray(cols["t"], dtype=np.int64),
            p_hub=np.asarray(cols["p_vstar"], dtype=np.float64),
            psi_clique_in=np.asarray(cols["re_psi_clique_in"])
            + 1j * np.asarray(cols["im_psi_clique_in"]),
            psi_star_in=np.asarray(cols["re_psi_star_in"])
            + 1j * np.asarray(cols["im_psi_star_in"]),
            metadata={k: str(v) for k, v in payload["metadata"].items()},
        )
