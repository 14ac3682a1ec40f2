"""Iterated channel demos: nested numerical ranges of A, Phi(A), Phi^2(A)."""
from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass

import numpy as np

from . import channels, svg
from .linalg import matrix_to_json
from .numrange import RangeBoundary, boundary, ellipse_2x2

A1 = np.array([[0, 1], [0, 0]], dtype=complex)
C1 = np.array([[0, 1, 0], [0, 1, 0], [0, 0, 2j]], dtype=complex)

DEMOS = {
    "fig1a": dict(channel=lambda: channels.decaying(0.5), start=A1, symbol="A",
                  title="Decaying channel, p = 0.5"),
    "fig1b": dict(channel=lambda: channels.phase_flip(0.25), start=A1, symbol="B",
                  title="Phase-flip channel, p = 0.25"),
    "fig2": dict(channel=lambda: channels.double_flip(0.5, 0.4), start=C1, symbol="C",
                 title="Double flip channel on a qutrit, p = 0.5, q = 0.4"),
}


@dataclass
class DemoResult:
    name: str
    matrices: list
    boundaries: list[RangeBoundary]
    barycenters: list[complex]
    title: str
    symbol: str

    def summary_csv(self) -> str:
        buf = io.StringIO()
        two = self.matrices[0].shape == (2, 2)
        head = "iterate,barycenter_re,barycenter_im,max_modulus,min_modulus"
        buf.write(head + (",semi_major,semi_minor\n" if two else "\n"))
        for j, (m, b, z) in enumerate(zip(self.matrices, self.boundaries, self.barycenters), start=1):
            row = f"{j},{z.real:.17g},{z.imag:.17g},{b.max_modulus():.17g},{b.min_modulus():.17g}"
            if two:
                e = ellipse_2x2(m)
                row += f",{e.semi_major:.17g},{e.semi_minor:.17g}"
            buf.write(row + "\n")
        return buf.getvalue()

    def to_svg(self) -> str:
        curves = [(b.boundary_points, f"W({self.symbol}({j}))") for j, b in enumerate(self.boundaries, start=1)]
        bary = self.barycenters[0]
        return svg.render(curves, [(bary, f"barycenter {bary.real:.4g}{bary.imag:+.4g}i")], self.title)

    def write(self, outdir, seed=None, workers=None) -> list[str]:
        os.makedirs(outdir, exist_ok=True)
        paths = []

        def put(fname, text):
            path = os.path.join(outdir, fname)
            with open(path, "w", newline="\n") as fh:
                fh.write(text)
            paths.append(path)

        for j, b in enumerate(self.boundaries, start=1):
            put(f"{self.name}_iter{j}.csv", b.to_csv())
        put(f"{self.name}_summary.csv", self.summary_csv())
        put(f"{self.name}.svg", self.to_svg())
        meta = {
            "demo": self.name,
            "seed": seed,
            "workers": workers,
            "num_angles": len(self.boundaries[0].angles),
            "matrices": [matrix_to_json(m) for m in self.matrices],
        }
        put(f"{self.name}_meta.json", json.dumps(meta, indent=1) + "\n")
        return paths


def run_demo(name: str, num_angles: int = 360, iterates: int = 3) -> DemoResult:
    try:
        cfg = DEMOS[name]
    except KeyError:
        raise ValueError(f"unknown demo {name!r}; choose from {sorted(DEMOS)}") from None
    ch = cfg["channel"]()
    mats = channels.iterate(ch, cfg["start"], iterates - 1)
    bnds = [boundary(m, num_angles) for m in mats]
    bary = [complex(np.trace(m) / m.shape[0]) for m in mats]
    return DemoResult(name, mats, bnds, bary, cfg["title"], cfg["symbol"])
