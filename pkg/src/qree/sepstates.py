"""Separable-state search space and the relative-entropy-of-entanglement
minimization.

A candidate separable state is a K-term convex mixture of product pure
states across a fixed bipartition,

    sigma(theta) = sum_k p_k |a_k><a_k| (x) |b_k><b_k|,

parametrized without constraints: mixture weights through a softmax over
logits and component vectors through explicit normalization.  Pure product
components lose no generality (every separable state is such a mixture),
and the unconstrained parametrization lets plain gradient descent with a
backtracking line search do the minimization.  Non-convexity in the
parameters is handled by independent seeded restarts; the reported value
is the best restart, which upper-bounds the true minimum.

Gradients: central finite differences are the reference; the default
analytic gradient (divided-difference derivatives of the matrix functions
chained through the parametrization) is required by the test suite to
match finite differences to 1e-4 relative error.

The internal objective is always finite: sigma eigenvalues are floored
inside logs and negative powers, which turns a KL support mismatch into a
large smooth penalty the optimizer can descend away from.  The reported
value is re-evaluated with the user-facing divergence at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmat import Bipartition, eig_hermitian
from .renyi import (TRADITIONAL, RenyiParameter, rel_entropy,
                    von_neumann_entropy)

# beyond this alpha the sandwiched divergence is effectively its
# alpha -> infinity limit; refuse rather than return noise
SANDWICHED_ALPHA_CAP = 64.0


@dataclass(frozen=True)
class OptimizerOptions:
    """Knobs for the multi-start descent.

    ``components`` defaults to 4 * dim_a * dim_b when left as None.
    ``gradient`` is "analytic" or "fd" (central finite differences);
    both run the identical descent loop on the identical objective.
    """

    restarts: int = 16
    max_iters: int = 2000
    grad_step: float = 1e-5
    tol_objective: float = 1e-7
    seed: int = 0
    floor: float = 1e-12
    components: int | None = None
    gradient: str = "analytic"

    def __post_init__(self) -> None:
        if (self.restarts < 1 or self.max_iters < 1 or self.grad_step <= 0
                or self.tol_objective <= 0 or self.floor <= 0):
            raise ValueError("optimizer options must be positive, restarts >= 1")
        if self.components is not None and self.components < 1:
            raise ValueError("components must be >= 1")
        if self.gradient not in ("analytic", "fd"):
            raise ValueError("gradient must be 'analytic' or 'fd'")

    def n_components(self, cut: Bipartition) -> int:
        return self.components if self.components is not None else 4 * cut.dim


@dataclass(frozen=True)
class SeparableAnsatz:
    """Parameter bundle for one separable mixture across ``cut``."""

    cut: Bipartition
    logits: np.ndarray      # (K,)
    vectors_a: np.ndarray   # (K, dim_a) complex
    vectors_b: np.ndarray   # (K, dim_b) complex

    @property
    def components(self) -> int:
        return len(self.logits)


@dataclass
class REEResult:
    """Outcome of one relative-entropy-of-entanglement minimization."""

    value: float
    closest_state: np.ndarray
    converged: bool
    restarts_used: int
    best_restart_seed: int
    iterations: int


def weights_from_logits(logits: np.ndarray) -> np.ndarray:
    e = np.exp(logits - np.max(logits, axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def realize(ansatz: SeparableAnsatz) -> np.ndarray:
    """Assemble the density matrix sum_k p_k |a_k b_k><a_k b_k|."""
    na = np.linalg.norm(ansatz.vectors_a, axis=1)
    nb = np.linalg.norm(ansatz.vectors_b, axis=1)
    if np.any(na < 1e-30) or np.any(nb < 1e-30):
        raise ValueError("ansatz contains a zero component vector")
    a = ansatz.vectors_a / na[:, None]
    b = ansatz.vectors_b / nb[:, None]
    p = weights_from_logits(np.asarray(ansatz.logits, dtype=float))
    psi = np.einsum("ki,kj->kij", a, b).reshape(ansatz.components, -1)
    sigma = np.einsum("k,ki,kj->ij", p, psi, psi.conj())
    return 0.5 * (sigma + sigma.conj().T)


def random_ansatz(cut: Bipartition, components: int, rng: np.random.Generator) -> SeparableAnsatz:
    """Haar-direction product vectors with softmax-normal weights."""
    shape_a, shape_b = (components, cut.dim_a), (components, cut.dim_b)
    return SeparableAnsatz(
        cut=cut,
        logits=rng.normal(size=components),
        vectors_a=rng.normal(size=shape_a) + 1j * rng.normal(size=shape_a),
        vectors_b=rng.normal(size=shape_b) + 1j * rng.normal(size=shape_b),
    )


# ----------------------------------------------------------------------
# parameter packing: theta = [logits | Re a | Im a | Re b | Im b]

def _pack(ansatz: SeparableAnsatz) -> np.ndarray:
    return np.concatenate([
        np.asarray(ansatz.logits, dtype=float),
        ansatz.vectors_a.real.ravel(), ansatz.vectors_a.imag.ravel(),
        ansatz.vectors_b.real.ravel(), ansatz.vectors_b.imag.ravel(),
    ])


def _unpack(theta: np.ndarray, cut: Bipartition, k: int) -> SeparableAnsatz:
    da, db = cut.dim_a, cut.dim_b
    logits, a_re, a_im, b_re, b_im = np.split(
        theta, np.cumsum([k, k * da, k * da, k * db]))
    return SeparableAnsatz(
        cut=cut,
        logits=logits.copy(),
        vectors_a=(a_re + 1j * a_im).reshape(k, da),
        vectors_b=(b_re + 1j * b_im).reshape(k, db),
    )


def _realize_batch(thetas: np.ndarray, cut: Bipartition, k: int) -> np.ndarray:
    """Vectorized realize() over a (B, n_params) batch of parameter vectors."""
    da, db = cut.dim_a, cut.dim_b
    bsz = thetas.shape[0]
    logits = thetas[:, :k]
    a = (thetas[:, k:k + k * da] + 1j * thetas[:, k + k * da:k + 2 * k * da]).reshape(bsz, k, da)
    off = k + 2 * k * da
    b = (thetas[:, off:off + k * db] + 1j * thetas[:, off + k * db:]).reshape(bsz, k, db)
    a = a / np.linalg.norm(a, axis=2, keepdims=True)
    b = b / np.linalg.norm(b, axis=2, keepdims=True)
    p = weights_from_logits(logits)
    psi = np.einsum("bki,bkj->bkij", a, b).reshape(bsz, k, da * db)
    sig = np.einsum("bk,bki,bkj->bij", p, psi, psi.conj())
    return 0.5 * (sig + sig.conj().transpose(0, 2, 1))


# ----------------------------------------------------------------------
# divergence objective with a fixed rho: value, batched value, and
# analytic gradient with respect to sigma

class _Objective:
    def __init__(self, rho: np.ndarray, p: RenyiParameter, floor: float):
        self.p = p
        self.alpha = p.alpha
        self.floor = floor
        self.rho = np.asarray(rho, dtype=complex)
        if p.is_kl:
            self.kind = "kl"
            self.s_rho = von_neumann_entropy(rho)
        elif p.variant == TRADITIONAL:
            self.kind = "trad"
            wr, vr = eig_hermitian(rho)
            self.rho_pow = (vr * np.maximum(wr, 0.0) ** self.alpha) @ vr.conj().T
        else:
            self.kind = "sand"
            self.c = (1.0 - self.alpha) / (2.0 * self.alpha)

    # -- single evaluation ------------------------------------------------
    def value(self, sigma: np.ndarray) -> float:
        ws, vs = np.linalg.eigh(sigma)
        if self.kind == "kl":
            occ = np.sum(vs.conj() * (self.rho @ vs), axis=0).real
            return float(-self.s_rho - occ @ np.log(np.maximum(ws, self.floor)))
        if self.kind == "trad":
            g = np.maximum(ws, self.floor) ** (1.0 - self.alpha)
            occ = np.sum(vs.conj() * (self.rho_pow @ vs), axis=0).real
            return math.log(occ @ g) / (self.alpha - 1.0)
        g = np.maximum(ws, self.floor) ** self.c
        s = (vs * g) @ vs.conj().T
        m = s @ self.rho @ s
        wm = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        tr = float(np.sum(np.maximum(wm, 0.0) ** self.alpha))
        return math.log(tr) / (self.alpha - 1.0)

    def value_batch(self, sigmas: np.ndarray) -> np.ndarray:
        ws, vs = np.linalg.eigh(sigmas)
        if self.kind == "kl":
            occ = np.einsum("bji,jk,bki->bi", vs.conj(), self.rho, vs).real
            cross = np.sum(occ * np.log(np.maximum(ws, self.floor)), axis=1)
            return -self.s_rho - cross
        if self.kind == "trad":
            g = np.maximum(ws, self.floor) ** (1.0 - self.alpha)
            occ = np.einsum("bji,jk,bki->bi", vs.conj(), self.rho_pow, vs).real
            tr = np.sum(occ * g, axis=1)
            return np.log(tr) / (self.alpha - 1.0)
        g = np.maximum(ws, self.floor) ** self.c
        s = np.einsum("bik,bk,bjk->bij", vs, g, vs.conj())
        m = s @ self.rho @ s
        wm = np.linalg.eigvalsh(0.5 * (m + m.conj().transpose(0, 2, 1)))
        tr = np.sum(np.maximum(wm, 0.0) ** self.alpha, axis=1)
        return np.log(tr) / (self.alpha - 1.0)

    # -- gradient with respect to sigma -----------------------------------
    def _divided_diff(self, w: np.ndarray, g: np.ndarray, gp: np.ndarray) -> np.ndarray:
        """First divided differences of the floored scalar function."""
        dw = w[:, None] - w[None, :]
        dg = g[:, None] - g[None, :]
        near = np.abs(dw) < 1e-8 * (1.0 + np.abs(w[:, None]) + np.abs(w[None, :]))
        safe = np.where(near, 1.0, dw)
        phi = np.where(near, 0.5 * (gp[:, None] + gp[None, :]), dg / safe)
        return phi

    def grad_sigma(self, sigma: np.ndarray) -> tuple[float, np.ndarray]:
        """Objective value and its Hermitian gradient dF/d(sigma)."""
        ws, vs = eig_hermitian(sigma)
        f = self.floor
        wf = np.maximum(ws, f)
        live = ws > f
        if self.kind == "kl":
            g, gp = np.log(wf), np.where(live, 1.0 / wf, 0.0)
            occ = vs.conj().T @ self.rho @ vs
            val = -self.s_rho - float(np.sum(np.diagonal(occ).real * g))
            grad = -vs @ (occ * self._divided_diff(ws, g, gp)) @ vs.conj().T
        elif self.kind == "trad":
            e = 1.0 - self.alpha
            g, gp = wf ** e, np.where(live, e * wf ** (e - 1.0), 0.0)
            occ = vs.conj().T @ self.rho_pow @ vs
            tr = float(np.sum(np.diagonal(occ).real * g))
            val = math.log(tr) / (self.alpha - 1.0)
            grad = vs @ (occ * self._divided_diff(ws, g, gp)) @ vs.conj().T
            grad /= (self.alpha - 1.0) * tr
        else:
            g, gp = wf ** self.c, np.where(live, self.c * wf ** (self.c - 1.0), 0.0)
            s = (vs * g) @ vs.conj().T
            m = s @ self.rho @ s
            wm, vm = eig_hermitian(0.5 * (m + m.conj().T))
            wm_pos = np.maximum(wm, 0.0)
            tr = float(np.sum(wm_pos ** self.alpha))
            val = math.log(tr) / (self.alpha - 1.0)
            hp = self.alpha * np.maximum(wm, f) ** (self.alpha - 1.0)
            hprime = (vm * hp) @ vm.conj().T
            w_mat = self.rho @ s @ hprime + hprime @ s @ self.rho
            occ = vs.conj().T @ w_mat @ vs
            grad = vs @ (occ * self._divided_diff(ws, g, gp)) @ vs.conj().T
            grad /= (self.alpha - 1.0) * tr
        return val, 0.5 * (grad + grad.conj().T)


class _ParamObjective:
    """The objective as a function of packed parameters, with gradients."""

    def __init__(self, rho: np.ndarray, cut: Bipartition, p: RenyiParameter,
                 opts: OptimizerOptions):
        self.cut = cut
        self.k = opts.n_components(cut)
        self.h = opts.grad_step
        self.mode = opts.gradient
        self.obj = _Objective(rho, p, opts.floor)
        self.n_params = self.k * (1 + 2 * cut.dim_a + 2 * cut.dim_b)
        self.evals = 0

    def _parts(self, theta: np.ndarray):
        """Normalized component vectors, weights, and product vectors."""
        k, da, db = self.k, self.cut.dim_a, self.cut.dim_b
        la = k * da
        a = (theta[k:k + la] + 1j * theta[k + la:k + 2 * la]).reshape(k, da)
        off = k + 2 * la
        b = (theta[off:off + k * db] + 1j * theta[off + k * db:]).reshape(k, db)
        na = np.sqrt(np.sum(a.real**2 + a.imag**2, axis=1))
        nb = np.sqrt(np.sum(b.real**2 + b.imag**2, axis=1))
        a = a / na[:, None]
        b = b / nb[:, None]
        logits = theta[:k]
        e = np.exp(logits - logits.max())
        p = e / e.sum()
        psi = (a[:, :, None] * b[:, None, :]).reshape(k, da * db)
        return a, b, na, nb, p, psi

    def _sigma(self, theta: np.ndarray) -> np.ndarray:
        _, _, _, _, p, psi = self._parts(theta)
        sigma = psi.T @ (p[:, None] * psi.conj())
        return 0.5 * (sigma + sigma.conj().T)

    def value(self, theta: np.ndarray) -> float:
        self.evals += 1
        return self.obj.value(self._sigma(theta))

    def value_many(self, thetas: np.ndarray) -> np.ndarray:
        self.evals += len(thetas)
        return self.obj.value_batch(_realize_batch(thetas, self.cut, self.k))

    def value_and_grad(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        if self.mode == "fd":
            return self.value(theta), self.fd_gradient(theta)
        return self.analytic_value_and_grad(theta)

    def fd_gradient(self, theta: np.ndarray) -> np.ndarray:
        """Central finite differences, evaluated as one batched sweep."""
        h = self.h
        n = self.n_params
        thetas = np.repeat(theta[None], 2 * n, axis=0)
        idx = np.arange(n)
        thetas[idx, idx] += h
        thetas[n + idx, idx] -= h
        vals = self.value_many(thetas)
        return (vals[:n] - vals[n:]) / (2 * h)

    def analytic_gradient(self, theta: np.ndarray) -> np.ndarray:
        return self.analytic_value_and_grad(theta)[1]

    def analytic_value_and_grad(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        self.evals += 1
        k, da, db = self.k, self.cut.dim_a, self.cut.dim_b
        a, b, na, nb, p, psi = self._parts(theta)
        sigma = psi.T @ (p[:, None] * psi.conj())
        val, grad_s = self.obj.grad_sigma(0.5 * (sigma + sigma.conj().T))

        u = psi @ grad_s.T            # row k holds grad_s @ psi_k
        c = np.sum(psi.conj() * u, axis=1).real
        g_logits = p * (c - float(p @ c))
        u3 = u.reshape(k, da, db)
        r = np.sum(u3 * b.conj()[:, None, :], axis=2)
        s_vec = np.sum(u3 * a.conj()[:, :, None], axis=1)
        proj_a = np.sum(r.conj() * a, axis=1).real
        proj_b = np.sum(s_vec.conj() * b, axis=1).real
        ga = (2 * p / na)[:, None] * (r - proj_a[:, None] * a)
        gb = (2 * p / nb)[:, None] * (s_vec - proj_b[:, None] * b)
        grad = np.concatenate([g_logits, ga.real.ravel(), ga.imag.ravel(),
                               gb.real.ravel(), gb.imag.ravel()])
        return val, grad


# ----------------------------------------------------------------------
# descent loop

def _descend(fn: _ParamObjective, theta: np.ndarray, opts: OptimizerOptions
             ) -> tuple[float, np.ndarray, int, bool]:
    """Gradient descent with Armijo backtracking line search.

    The trial step is the Barzilai-Borwein estimate from the previous
    accepted step (falling back to doubling), then halved until the
    sufficient-decrease test passes.  Convergence is declared when the
    objective improves by less than ``tol_objective`` over a sweep of 10
    iterations.  Returns (best value, best theta, iterations, converged).
    """
    f, g = fn.value_and_grad(theta)
    step = 1.0
    sweep_ref = f
    converged = False
    it = 0
    for it in range(1, opts.max_iters + 1):
        gsq = float(g @ g)
        if gsq < 1e-28:
            converged = True
            break
        t = step
        accepted = False
        for _ in range(60):
            theta_try = theta - t * g
            f_try = fn.value(theta_try)
            if f_try <= f - 1e-4 * t * gsq:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # numerically stationary: no descending step along the gradient
            converged = True
            break
        f_new, g_new = fn.value_and_grad(theta_try)
        dgrad = g_new - g
        curv = -t * float(g @ dgrad)
        if curv > 1e-30:
            step = min(max(t * t * gsq / curv, 1e-10), 1e4)
        else:
            step = min(t * 2.0, 1e4)
        theta, f, g = theta_try, min(f_try, f_new), g_new
        if it % 10 == 0:
            if sweep_ref - f < opts.tol_objective:
                converged = True
                break
            sweep_ref = f
    return f, theta, it, converged


def _restart_seed(seed: int, restart: int) -> int:
    return (int(seed) * 1_000_003 + restart) & 0x7FFFFFFF


def _initial_ansatz(rho: np.ndarray, cut: Bipartition, k: int, restart: int,
                    rng: np.random.Generator) -> SeparableAnsatz:
    """Restart 0 starts near the computational-basis diagonal of rho (a
    separable state already); later restarts start fully random."""
    if restart > 0:
        return random_ansatz(cut, k, rng)
    da, db = cut.dim_a, cut.dim_b
    # spare components start at negligible weight so nearly-dead mixture
    # weight does not have to bleed out through slow softmax dynamics
    logits = np.full(k, -12.0)
    va = 0.02 * (rng.normal(size=(k, da)) + 1j * rng.normal(size=(k, da)))
    vb = 0.02 * (rng.normal(size=(k, db)) + 1j * rng.normal(size=(k, db)))
    diag = np.clip(np.diagonal(rho).real, 1e-9, None)
    for idx in range(min(k, da * db)):
        ia, ib = divmod(idx, db)
        logits[idx] = math.log(diag[idx])
        va[idx, ia] += 1.0
        vb[idx, ib] += 1.0
    return SeparableAnsatz(cut=cut, logits=logits, vectors_a=va, vectors_b=vb)


def _check_ree_args(rho: np.ndarray, cut: Bipartition, p: RenyiParameter) -> None:
    if rho.shape[0] != cut.dim:
        raise ValueError(f"state dim {rho.shape[0]} does not match cut "
                         f"{cut.dim_a}x{cut.dim_b}")
    if p.variant != TRADITIONAL and p.alpha > SANDWICHED_ALPHA_CAP:
        raise ValueError(f"sandwiched alpha capped at {SANDWICHED_ALPHA_CAP}")


def ree(rho: np.ndarray, cut: Bipartition, p: RenyiParameter,
        opts: OptimizerOptions = OptimizerOptions()) -> REEResult:
    """Relative entropy of entanglement: min over separable sigma of the
    selected divergence, by multi-start descent.

    The returned value is the divergence re-evaluated at the best state
    found, so it is reproducible from ``closest_state`` alone and is an
    upper bound on the true minimum.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_ree_args(rho, cut, p)
    fn = _ParamObjective(rho, cut, p, opts)
    k = fn.k
    best = None
    for restart in range(opts.restarts):
        seed_r = _restart_seed(opts.seed, restart)
        rng = np.random.default_rng(seed_r)
        theta0 = _pack(_initial_ansatz(rho, cut, k, restart, rng))
        f, theta, iters, conv = _descend(fn, theta0, opts)
        if best is None or f < best[0]:
            best = (f, theta, iters, conv, seed_r)
    _, theta, iters, conv, seed_r = best
    sigma = realize(_unpack(theta, cut, k))
    value = rel_entropy(rho, sigma, p, opts.floor)
    return REEResult(value=float(value), closest_state=sigma, converged=conv,
                     restarts_used=opts.restarts, best_restart_seed=seed_r,
                     iterations=iters)


def schmidt_entropy(psi: np.ndarray, cut: Bipartition) -> float:
    """Von Neumann entropy across ``cut`` of a normalized pure state.

    Independent oracle for ree at alpha = 1 on pure states: the REE of a
    pure bipartite state is the entropy of its Schmidt weights.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("state vector is not normalized")
    if len(psi) != cut.dim:
        raise ValueError("state dimension does not match cut")
    s = np.linalg.svd(psi.reshape(cut.dim_a, cut.dim_b), compute_uv=False)
    w = s * s
    w = w[w > len(w) * np.finfo(float).eps]
    return float(-np.sum(w * np.log(w)))


def sample_separable_batch(cut: Bipartition, n: int, components: int,
                           rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` random separable states as an (n, d, d) stack.

    Every draw is a realized ansatz state.  Two sub-families alternate:
    generic mixtures of independent Haar product vectors with softmax
    weights, and Dirichlet-weighted diagonal mixtures in a random product
    basis.  The second family contains the closest separable state of
    every pure state (a weighted product-basis diagonal), which makes the
    sampled minimum a usefully tight upper bound.
    """
    k, da, db = components, cut.dim_a, cut.dim_b
    n_diag = n // 2
    n_gen = n - n_diag
    out = np.empty((n, cut.dim, cut.dim), dtype=complex)

    logits = rng.normal(size=(n_gen, k))
    a = rng.normal(size=(n_gen, k, da)) + 1j * rng.normal(size=(n_gen, k, da))
    b = rng.normal(size=(n_gen, k, db)) + 1j * rng.normal(size=(n_gen, k, db))
    a /= np.linalg.norm(a, axis=2, keepdims=True)
    b /= np.linalg.norm(b, axis=2, keepdims=True)
    pw = weights_from_logits(logits)
    psi = np.einsum("bki,bkj->bkij", a, b).reshape(n_gen, k, cut.dim)
    out[:n_gen] = np.einsum("bk,bki,bkj->bij", pw, psi, psi.conj())

    if n_diag:
        ga = rng.normal(size=(n_diag, da, da)) + 1j * rng.normal(size=(n_diag, da, da))
        gb = rng.normal(size=(n_diag, db, db)) + 1j * rng.normal(size=(n_diag, db, db))
        qa = np.linalg.qr(ga)[0]
        qb = np.linalg.qr(gb)[0]
        # sparse weights reach the low-rank corners where optima live
        w = rng.dirichlet(np.full(cut.dim, 0.35), size=n_diag)
        psi = np.einsum("bai,bcj->bijac", qa, qb).reshape(n_diag, cut.dim, cut.dim)
        out[n_gen:] = np.einsum("bk,bki,bkj->bij", w, psi, psi.conj())
    return 0.5 * (out + out.conj().transpose(0, 2, 1))


def sample_upper_bound(rho: np.ndarray, cut: Bipartition, p: RenyiParameter,
                       n_samples: int, seed: int,
                       components: int | None = None,
                       floor: float = 1e-12) -> float:
    """Brute-force oracle: minimum divergence over random separable states.

    Every sample is separable by construction, so the result upper-bounds
    the true REE (and hence any correct optimizer output, within
    tolerance).  Deterministic for a fixed seed.
    """
    rho = np.asarray(rho, dtype=complex)
    _check_ree_args(rho, cut, p)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    k = components if components is not None else 4 * cut.dim
    obj = _Objective(rho, p, floor)
    rng = np.random.default_rng(seed)
    best = math.inf
    remaining = n_samples
    while remaining > 0:
        bsz = min(remaining, 4096)
        sig = sample_separable_batch(cut, bsz, k, rng)
        vals = obj.value_batch(sig)
        best = min(best, float(vals.min()))
        remaining -= bsz
    return best
