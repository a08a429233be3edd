import logging

import numpy as np
from scipy.linalg import logm

from ..evolve import MODE_NAMES, PI_MODES, ZERO_MODES, edge_modes, eigenphases, floquet_propagator
from ..evolve.edge_modes import _align, _real_basis
from ..exceptions import GapClosedByBreaking
from ..gaussian import make_rng, measure_parity
from .edge_fock import LOGICAL_BASIS, EdgeFockSpace

logger = logging.getLogger(__name__)

READOUT_TOL = 1e-9
# Edge eigenphases must stay closer to 0 or pi than this fraction of the bulk gap
SEPARATION = 0.5


def _mod_pi(x):
    """Map to (-pi/2, pi/2]."""
    return np.pi / 2 - np.mod(np.pi / 2 - np.asarray(x), np.pi)


class ReadoutReport:
    """
    Quasienergies of the four logical states under a chiral-symmetry-breaking drive.
    """
    def __init__(self, energies, mu1, mu2, edge_generator):
        """
        Parameters:
        - energies: length-4 array of edge quasienergies of |00>, |01>, |10>, |11>.
        - mu1, mu2: the symmetry-breaking potentials used.
        - edge_generator: 6x6 real antisymmetric generator of the edge dynamics.
        """
        self.energies = np.asarray(energies, dtype=float)
        self.mu1 = mu1
        self.mu2 = mu2
        self.edge_generator = edge_generator
        self.offsets = _mod_pi(self.energies - self.energies[0])

    @property
    def distinguishability(self):
        """Pairwise separations of the offsets on the circle of circumference pi."""
        difference = self.offsets[:, None] - self.offsets[None, :]
        return np.abs(_mod_pi(difference))

    def degenerate(self, a, b, tol=READOUT_TOL):
        i, j = LOGICAL_BASIS.index(a), LOGICAL_BASIS.index(b)
        return bool(self.distinguishability[i, j] <= tol)

    def all_distinct(self, tol=READOUT_TOL):
        D = self.distinguishability + np.eye(len(LOGICAL_BASIS)) * np.inf
        return bool(np.min(D) > tol)

    def all_degenerate(self, tol=READOUT_TOL):
        return bool(np.max(self.distinguishability) <= tol)

    def to_dict(self):
        return {
            "mu1": self.mu1,
            "mu2": self.mu2,
            "offsets": {label: float(value) for label, value in zip(LOGICAL_BASIS, self.offsets)},
            "distinguishability": np.round(self.distinguishability, 15).tolist(),
        }


def _edge_frame(O, reference):
    """
    Real bases of the four eigenphases nearest 0 and the two nearest pi, aligned with reference.
    """
    eps, Z = eigenphases(O)
    order_zero = np.argsort(np.abs(eps))
    order_pi = np.argsort(np.pi - np.abs(eps))
    zero, pi = order_zero[:4], order_pi[:2]
    bulk = np.setdiff1d(np.arange(len(eps)), np.concatenate([zero, pi]))
    if bulk.size:
        bulk_zero = float(np.min(np.abs(eps[bulk])))
        bulk_pi = float(np.min(np.pi - np.abs(eps[bulk])))
        edge_zero = float(np.max(np.abs(eps[zero])))
        edge_pi = float(np.max(np.pi - np.abs(eps[pi])))
        if edge_zero >= SEPARATION * bulk_zero or edge_pi >= SEPARATION * bulk_pi:
            raise GapClosedByBreaking(
                f"Edge eigenphases ({edge_zero:.3e}, pi - {edge_pi:.3e}) merge with the bulk "
                f"({bulk_zero:.3e}, pi - {bulk_pi:.3e})"
            )
    ref = np.asarray(reference)
    columns = np.zeros((O.shape[0], len(MODE_NAMES)))
    zero_columns = [MODE_NAMES.index(name) for name in ZERO_MODES]
    pi_columns = [MODE_NAMES.index(name) for name in PI_MODES]
    columns[:, zero_columns] = _align(_real_basis(Z[:, zero]), ref[:, zero_columns])
    columns[:, pi_columns] = _align(_real_basis(Z[:, pi]), ref[:, pi_columns])
    return columns


def readout(params, mu1, mu2, edge=None):
    """
    Quasienergy offsets of the logical states once chiral symmetry is broken.

    The edge-restricted propagator, with the pi sector shifted by pi, is written as
    exp(G); the edge Hamiltonian (i/4) gamma^T G gamma is then evaluated on each logical
    state. Offsets are relative to |00> and taken modulo pi.

    Parameters:
    - params: single-wire DriveParams.
    - mu1, mu2: symmetry-breaking potentials times T.

    Returns:
    - ReadoutReport instance.
    """
    broken = params.replace(mu1=mu1, mu2=mu2)
    reference = edge_modes(floquet_propagator(broken, include_break=False), N=params.N)
    O = np.asarray(floquet_propagator(broken))
    E = _edge_frame(O, reference)

    restricted = E.T @ O @ E
    shift = np.ones(len(MODE_NAMES))
    shift[[MODE_NAMES.index(name) for name in PI_MODES]] = -1
    G = np.real(logm(restricted * shift[:, None]))
    G = (G - G.T) / 2

    edge = edge or EdgeFockSpace()
    H = edge.space.bilinear(G)
    energies = [float(np.real(np.asarray(edge.logical_state(label)).conj() @ H @ np.asarray(edge.logical_state(label))))
                for label in LOGICAL_BASIS]
    report = ReadoutReport(energies, mu1, mu2, G)
    logger.info("Readout offsets at mu1=%g, mu2=%g: %s", mu1, mu2, np.round(report.offsets, 8).tolist())
    return report


def measure_logical(state, modes, force=(None, None), rng=None):
    """
    Read both logical bits of one wire by measuring the left and right zero-mode parities.

    Parameters:
    - state: CovarianceState.
    - modes: EdgeModeSet of the wire.
    - force: pair of forced outcomes (or None entries).
    - rng: seed or Generator.

    Returns:
    - bits: str such as "01" (outcome +1 reads 0).
    - records: list of MeasurementRecords.
    - state: post-measurement CovarianceState.
    """
    rng = make_rng(rng)
    records = []
    bits = ""
    for side, forced in zip(("left", "right"), force):
        record, state = measure_parity(
            state, modes.mode(f"zero1_{side}"), modes.mode(f"zero2_{side}"), force=forced, rng=rng,
            labels=(f"zero1_{side}", f"zero2_{side}"),
        )
        records.append(record)
        bits += "0" if record.outcome == 1 else "1"
    return bits, records, state
