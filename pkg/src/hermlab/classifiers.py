"""Predicates for the special metric classes.

All checks run on the unitary-frame tensors of a TorsionPackage and report
both a boolean flag and the residual magnitude that was thresholded, so
callers can judge borderline cases themselves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import lie_hermitian as lh
from . import torsion_engine as te


@dataclass(frozen=True)
class ClassificationReport:
    tol: float
    kahler: bool
    kahler_residual: float
    balanced: bool
    balanced_residual: float
    gauduchon: bool
    gauduchon_residual: float
    pluriclosed: bool
    pluriclosed_residual: float
    lck_shape: bool
    lck_residual: float
    stp: bool
    stp_residuals: dict = field(default_factory=dict)
    nilpotent_J: bool = False
    nilpotent_J_witness: tuple | None = None


def lck_torsion(eta, n=None):
    """The locally-conformally-Kaehler torsion shape determined by eta:

    T^j_{ik} = 1/(n-1) (delta_{ij} eta_k - delta_{kj} eta_i).
    """
    eta = np.asarray(eta, dtype=complex)
    n = eta.shape[0] if n is None else n
    T = np.zeros((n, n, n), dtype=complex)
    eye = np.eye(n)
    for j in range(n):
        for i in range(n):
            for k in range(n):
                T[j, i, k] = (eye[i, j] * eta[k] - eye[k, j] * eta[i]) / (n - 1)
    return T


def lck_closed_forms(eta):
    """Closed forms of A, B, |T|^2 for an LCK torsion shape."""
    eta = np.asarray(eta, dtype=complex)
    n = eta.shape[0]
    e2 = float(np.sum(np.abs(eta) ** 2))
    outer = np.outer(eta, eta.conj())
    A = (e2 * np.eye(n) + (n - 2) * outer) / (n - 1) ** 2
    B = 2.0 * (e2 * np.eye(n) - outer) / (n - 1) ** 2
    norm_T2 = 2.0 * e2 / (n - 1)
    return A, B, norm_T2


def lck_check(pkg, tol=1e-9):
    """Is the torsion of the exact LCK shape built from its own trace?"""
    residual = float(np.abs(pkg.T - lck_torsion(pkg.eta, pkg.n)).max())
    return residual <= tol, residual


def stp_identity_residuals(T, gamma, eta):
    """Residuals of the parallel-torsion identities.

    Keys:
      nabla_s_hol / nabla_s_bar -- components of the Strominger-connection
        derivative of T (both must vanish for STP);
      quadratic_hol -- the purely quadratic identity (vanishing of the
        holomorphic T*T combination);
      eta_contraction -- sum_r eta_r T^r_{ik};
      phi_xi_vs_BA -- phi - xi - (B - A).
    """
    DT = te.covariant_derivative_T(T, gamma)
    Thol = te.holomorphic_derivative_T(T, gamma)
    r1 = np.einsum("jrk,ril->jikl", T, T)
    r1 += np.einsum("jir,rkl->jikl", T, T)
    r1 -= np.einsum("rik,jrl->jikl", T, T)
    r2 = -np.einsum("jrk,irl->jikl", T, T.conj())
    r2 -= np.einsum("jir,krl->jikl", T, T.conj())
    r2 += np.einsum("rik,rjl->jikl", T, T.conj())
    A, B = te.ab_tensors(T)
    phi, xi, _ = te.phi_xi_tensors(T, DT, eta)
    return {
        "nabla_s_hol": float(np.abs(Thol - r1).max()),
        "nabla_s_bar": float(np.abs(DT - r2).max()),
        "quadratic_hol": float(np.abs(r1).max()),
        "eta_contraction": float(np.abs(np.einsum("r,rik->ik", eta, T)).max()),
        "phi_xi_vs_BA": float(np.abs((phi - xi) - (B - A)).max()),
    }


def stp_check(pkg, tol=1e-9):
    """Strominger torsion parallel: max |nabla^s T| <= tol.

    Decided directly from the Strominger-connection derivative; the derived
    quadratic identities are reported as residuals for cross-validation.
    """
    residuals = stp_identity_residuals(pkg.T, pkg.gamma, pkg.eta)
    flag = max(residuals["nabla_s_hol"], residuals["nabla_s_bar"]) <= tol
    return flag, residuals


def nilpotent_J_check(sc, tol=1e-12):
    """Search frame permutations for the nilpotent-J triangular pattern:

    C^j_{ik} = D^i_{jk} = 0 unless j > i and j > k.

    Returns (flag, witness) with the witness a 0-based permutation sigma,
    meaning the relabeled frame phi'_a = phi_{sigma(a)} is triangular.  Only
    permutations of the given frame are searched, not general frame changes.
    """
    n = sc.n
    for sigma in itertools.permutations(range(n)):
        ok = True
        for j in range(n):
            for i in range(n):
                for k in range(n):
                    if j > i and j > k:
                        continue
                    if (
                        abs(sc.C[sigma[j], sigma[i], sigma[k]]) > tol
                        or abs(sc.D[sigma[i], sigma[j], sigma[k]]) > tol
                    ):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return True, sigma
    return False, None


def pluriclosed_residual(pkg):
    """Norm of del delbar omega in the unitary frame."""
    n = pkg.n
    omega = te.omega_form(n)
    delbar_omega = lh.exterior_d(omega, pkg.sc_u).bidegree_part(1, 2)
    ddbar = lh.exterior_d(delbar_omega, pkg.sc_u).bidegree_part(2, 2)
    return ddbar.norm()


def classify(pkg, hs, tol=1e-9):
    """Full classification of an analyzed Hermitian structure."""
    max_T = float(np.abs(pkg.T).max())
    max_eta = float(np.abs(pkg.eta).max())
    gaud = abs(pkg.norm_eta2 - pkg.chi)
    plc = pluriclosed_residual(pkg)
    lck_flag, lck_res = lck_check(pkg, tol)
    stp_flag, stp_res = stp_check(pkg, tol)
    nilp_flag, witness = nilpotent_J_check(hs.sc)
    return ClassificationReport(
        tol=tol,
        kahler=max_T <= tol,
        kahler_residual=max_T,
        balanced=max_eta <= tol,
        balanced_residual=max_eta,
        gauduchon=gaud <= tol,
        gauduchon_residual=gaud,
        pluriclosed=plc <= tol,
        pluriclosed_residual=plc,
        lck_shape=lck_flag,
        lck_residual=lck_res,
        stp=stp_flag,
        stp_residuals=stp_res,
        nilpotent_J=nilp_flag,
        nilpotent_J_witness=witness,
    )
