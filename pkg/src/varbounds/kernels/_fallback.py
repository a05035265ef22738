"""Numpy reference implementation of the moment kernels."""

import numpy as np


def state_moments(hs: np.ndarray, rho: np.ndarray):
    """First moments and pair cross-moments of a stack of observables.

    Returns ``(exps, cross)`` with ``exps[j] = Tr(rho H_j)`` and
    ``cross[j, k] = Tr(rho H_j H_k)``.  Commutator expectations follow as
    ``cross - cross.T`` and second moments sit on the diagonal.
    """
    m = rho @ hs
    exps = np.trace(m, axis1=1, axis2=2)
    cross = np.einsum("jab,kba->jk", m, hs)
    return exps, cross


def pure_state_moments(hs: np.ndarray, psi: np.ndarray):
    """Same contract as :func:`state_moments` for a unit vector state.

    Uses ``<psi|H_j H_k|psi> = (H_j psi)^dag (H_k psi)``, valid for
    Hermitian ``H_j``.
    """
    v = hs @ psi
    exps = v @ psi.conj()
    cross = v.conj() @ v.T
    return exps, cross
