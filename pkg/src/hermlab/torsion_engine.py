"""Chern connection, Chern torsion, and all derived tensors.

Everything here expects structure constants expressed in a unitary frame
(Gram matrix = identity); :func:`analyze` performs the reduction first.  In
such a frame the Chern connection coefficients are Gamma^j_{ik} = D^j_{ik}
and the torsion is T^j_{ik} = -C^j_{ik} - D^j_{ik} + D^j_{ki}.  Because the
frame is left-invariant, frame derivatives of tensor components vanish and
covariant derivatives are pure Gamma-contractions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lie_hermitian as lh
from . import tensor_algebra as ta


@dataclass(frozen=True)
class TorsionPackage:
    """All derived torsion tensors of a Hermitian structure, unitary frame."""

    n: int
    P: np.ndarray          # frame change to the unitary frame
    sc_u: lh.StructureConstants
    gamma: np.ndarray      # Gamma[j,i,k] = Gamma^j_{ik}
    T: np.ndarray          # T[j,i,k] = T^j_{ik}
    DT: np.ndarray         # DT[j,i,k,l] = T^j_{ik, lbar}
    eta: np.ndarray        # eta[i]
    A: np.ndarray          # A[i,j] = A_{i jbar}
    B: np.ndarray          # B[i,j] = B_{i jbar}
    phi: np.ndarray        # phi[i,j] = phi_i^j  (coefficients of the (1,1)-form)
    xi: np.ndarray         # xi[i,j] = xi_i^j
    chi: float
    norm_T2: float
    norm_eta2: float
    lee: np.ndarray        # (1,0)-part of the Lee form theta = -(eta + etabar)


def chern_connection(sc_u):
    """Connection coefficients in a unitary frame: Gamma = D."""
    return sc_u.D.copy()


def chern_torsion(sc_u):
    """Torsion components T^j_{ik} = -C^j_{ik} - D^j_{ik} + D^j_{ki}."""
    return -sc_u.C - sc_u.D + np.swapaxes(sc_u.D, 1, 2)


def torsion_one_form(T):
    """The torsion 1-form, eta_i = sum_r T^r_{ri}."""
    return np.einsum("rri->i", T)


def connection_trace_one_form(sc_u):
    """Trace of the connection, sum_s D^s_{is}.

    Agrees with :func:`torsion_one_form` on unimodular inputs (all catalog
    entries); used as a cross-check there.
    """
    return np.einsum("sis->i", sc_u.D)


def ab_tensors(T):
    """The Hermitian PSD matrices A_{i jbar}, B_{i jbar}; both trace to |T|^2."""
    A = np.einsum("ris,rjs->ij", T, T.conj())
    B = np.einsum("jrs,irs->ij", T, T.conj())
    return A, B


def covariant_derivative_T(T, gamma):
    """T^j_{ik, lbar} for left-invariant data.

    DT[j,i,k,l] = sum_r ( T^j_{rk} conj(G^i_{rl}) + T^j_{ir} conj(G^k_{rl})
                          - T^r_{ik} conj(G^r_{jl}) ).
    """
    gc = gamma.conj()
    out = np.einsum("jrk,irl->jikl", T, gc)
    out += np.einsum("jir,krl->jikl", T, gc)
    out -= np.einsum("rik,rjl->jikl", T, gc)
    return out


def holomorphic_derivative_T(T, gamma):
    """T^j_{ik, l} (unbarred covariant derivative) for left-invariant data."""
    out = -np.einsum("jrk,ril->jikl", T, gamma)
    out -= np.einsum("jir,rkl->jikl", T, gamma)
    out += np.einsum("rik,jrl->jikl", T, gamma)
    return out


def phi_xi_tensors(T, DT, eta):
    """phi_i^j = sum_r T^j_{ir} conj(eta_r), xi_i^j = sum_r T^j_{ir, rbar}.

    Returns (phi, xi, chi) with chi = trace(xi), real for valid inputs.
    """
    phi = np.einsum("jir,r->ij", T, eta.conj())
    xi = np.einsum("jirr->ij", DT)
    chi = float(np.trace(xi).real)
    return phi, xi, chi


def xi_closed_form(sc_u, T, phi):
    """Independent route to xi from the structure constants.

    xi_i^j = sum_{r,s} ( T^j_{rs} conj(D^i_{rs}) - T^r_{is} conj(D^r_{js}) )
             + phi_i^j,
    with phi built from the connection-trace form.  Cross-checks the
    derivative route on every input.
    """
    D = sc_u.D
    out = np.einsum("jrs,irs->ij", T, D.conj())
    out -= np.einsum("ris,rjs->ij", T, D.conj())
    return out + phi


def omega_form(n):
    """The Kaehler form of the identity metric, i * sum phi_s ^ phibar_s."""
    w = ta.InvariantForm(n)
    for s in range(n):
        w._insert((s, n + s), 1j)
    return w


def del_omega(T):
    """The (2,1)-form i * sum T^j_{ik} phi_i ^ phi_k ^ phibar_j.

    The sum runs over both orders of the antisymmetric pair (i,k), so the
    result equals exactly twice the (2,1)-part of d(omega); the squared form
    norm of that (2,1)-part is |T|^2 / 2.
    """
    n = T.shape[0]
    out = ta.InvariantForm(n)
    for j in range(n):
        for i in range(n):
            for k in range(n):
                if T[j, i, k] != 0:
                    out._insert((i, k, n + j), 1j * T[j, i, k])
    return out


def form_coefficient_matrix(form, n):
    """Matrix M with form = i * sum M[i,k] phi_i ^ phibar_k, for (1,1)-forms."""
    M = np.zeros((n, n), dtype=complex)
    for idx, c in form.terms.items():
        if len(idx) != 2 or idx[0] >= n or idx[1] < n:
            raise ValueError("not a (1,1)-form")
        M[idx[0], idx[1] - n] = -1j * c
    return M


def analyze(hs):
    """Run the full unitary-frame pipeline on a Hermitian structure."""
    P, sc_u = lh.unitary_reduction(hs)
    n = sc_u.n
    gamma = chern_connection(sc_u)
    T = chern_torsion(sc_u)
    DT = covariant_derivative_T(T, gamma)
    eta = torsion_one_form(T)
    A, B = ab_tensors(T)
    phi, xi, chi = phi_xi_tensors(T, DT, eta)
    norm_T2 = float(np.sum(np.abs(T) ** 2))
    norm_eta2 = float(np.sum(np.abs(eta) ** 2))
    return TorsionPackage(
        n=n,
        P=P,
        sc_u=sc_u,
        gamma=gamma,
        T=T,
        DT=DT,
        eta=eta,
        A=A,
        B=B,
        phi=phi,
        xi=xi,
        chi=chi,
        norm_T2=norm_T2,
        norm_eta2=norm_eta2,
        lee=-eta,
    )
