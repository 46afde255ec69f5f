"""Named experiment presets.

Each preset is a flat config map (see configio) encoding one of the
reference experiments: quadratic-potential consensus of 20 particles, the
exponent sweep, the clustered power-law equilibrium, and the geodesic
sphere equilibria of the Morse law under its two circulated parameter
variants (shipped separately as the text and caption presets).
"""

from __future__ import annotations

import numpy as np

PRESETS: dict[str, dict[str, str]] = {
    # 20 particles, quadratic attraction: exponential consensus.
    "fig1_consensus_q2": {
        "potential.kind": "attractive_power",
        "potential.q": "2",
        "n_particles": "20",
        "dt": "0.01",
        "steps": "100000",
        "record_every": "10",
        "consensus_tol": "1e-6",
        "seed": "7",
        "init.radius": repr(np.pi / 4),
    },
    # Base run for sweeping the attraction exponent q. The small initial
    # disk and unit step keep the slow q > 2 runs affordable while leaving
    # the crossing order of any diameter threshold unchanged.
    "fig1_sweep_q": {
        "potential.kind": "attractive_power",
        "potential.q": "2",
        "n_particles": "20",
        "dt": "1.0",
        "steps": "12000",
        "record_every": "10",
        "consensus_tol": "1e-8",
        "seed": "7",
        "init.radius": "0.1",
    },
    # 40 particles, short-range repulsion p=2 / long-range attraction q=10:
    # equilibrium clusters at a handful of points.
    "fig2a_powerlaw_p2_q10": {
        "potential.kind": "repulsive_attractive_power",
        "potential.p": "2",
        "potential.q": "10",
        "n_particles": "40",
        "dt": "0.01",
        "steps": "20000",
        "record_every": "20",
        "consensus_tol": "1e-12",
        "seed": "3",
        "init.radius": repr(np.pi / 4),
    },
    # 40 particles, Morse law, text-variant parameters: equilibrium on a
    # geodesic sphere.
    "fig2b_morse_text": {
        "potential.kind": "morse",
        "potential.C": "0.5",
        "potential.l": "0.25",
        "potential.s_exp": "2",
        "n_particles": "40",
        "dt": "1.0",
        "steps": "160000",
        "record_every": "500",
        "consensus_tol": "1e-12",
        "seed": "3",
        "init.radius": repr(np.pi / 4),
    },
    # Same experiment with the caption-variant parameters.
    "fig2b_morse_caption": {
        "potential.kind": "morse",
        "potential.C": "0.1",
        "potential.l": "0.2",
        "potential.s_exp": "2",
        "n_particles": "40",
        "dt": "1.0",
        "steps": "60000",
        "record_every": "250",
        "consensus_tol": "1e-12",
        "seed": "3",
        "init.radius": repr(np.pi / 4),
    },
}
