"""Pure numpy residual and Jacobian of the discrete graph operator.

This is the fallback for the compiled kernel in ``_assembly.pyx``; both
must produce identical arrays.  The discrete operator at interior node P is

    sum over x-links of a_f g_f / Vx  +  sum over y-links of a_f g_f / Vy
        - 2 H t F_P^2

with ``g_f = (u_nb - u_P) / dist`` the outward difference along the link,
``a_f = (1 + (g_f^2 + gt_f^2) / F_f^2)^{-1/2}`` evaluated with the
tangential derivative ``gt_f`` averaged from the two end nodes, and the
Shortley-Weller cell widths ``Vx = (dE + dW)/2``, ``Vy = (dN + dS)/2``.
"""

import numpy as np

# direction j: 0=E, 1=W, 2=N, 3=S; tangential pair for x-links is (N, S)
_TANG = ((2, 3), (2, 3), (0, 1), (0, 1))


def _tangential(u_ext, nb, dist, pair):
    """Three-point nonuniform derivative at every node along `pair`.

    Returns ``(value, cplus, cminus)`` with
    ``value = cplus*u_plus + (cminus - cplus)*u_P - cminus*u_minus``.
    """
    jp, jm = pair
    dp = dist[:, jp]
    dm = dist[:, jm]
    cp = dm / (dp * (dp + dm))
    cm = dp / (dm * (dp + dm))
    up = u_ext[nb[:, jp]]
    um = u_ext[nb[:, jm]]
    u0 = u_ext[:-1]
    return cp * up + (cm - cp) * u0 - cm * um, cp, cm


def residual_jacobian(u, nb, dist, Fface, rhs, want_jac=True):
    """Residual vector and (optionally) COO triplets of its Jacobian.

    `rhs` is the right side ``2 H t F^2`` at the nodes.  Boundary values
    are zero: index -1 in `nb` reads the trailing zero of ``u_ext``.
    """
    N = u.shape[0]
    u_ext = np.concatenate([u, [0.0]])
    tx, cxp, cxm = _tangential(u_ext, nb, dist, (0, 1))
    ty, cyp, cym = _tangential(u_ext, nb, dist, (2, 3))
    tval = (tx, ty)
    tcoef = ((cxp, cxm), (cyp, cym))
    Vx = 0.5 * (dist[:, 0] + dist[:, 1])
    Vy = 0.5 * (dist[:, 2] + dist[:, 3])
    V = (Vx, Vx, Vy, Vy)

    res = -rhs.copy()
    rows, cols, vals = [], [], []
    idx = np.arange(N)
    for j in range(4):
        k = nb[:, j]
        interior = k >= 0
        g = (u_ext[k] - u) / dist[:, j]
        # tangential derivative: y-derivative on x-links and vice versa
        which = 1 if j < 2 else 0
        tang = tval[which]
        gt = np.where(interior, 0.5 * (tang + tang[np.where(interior, k, 0)]), tang)
        F2 = Fface[:, j] ** 2
        a = 1.0 / np.sqrt(1.0 + (g * g + gt * gt) / F2)
        res += a * g / V[j]
        if not want_jac:
            continue
        a3 = a ** 3
        dg = (a - a3 * g * g / F2) / V[j]
        dgt = (-a3 * g * gt / F2) / V[j]
        inv = 1.0 / dist[:, j]
        # through g
        rows += [idx, idx[interior]]
        cols += [idx, k[interior]]
        vals += [-dg * inv, (dg * inv)[interior]]
        # through gt = w_P * t(P) + w_nb * t(nb)
        jp, jm = _TANG[j]
        cp, cm = tcoef[which]
        wP = np.where(interior, 0.5, 1.0)
        for owner, w, mask in ((idx, wP * dgt, np.ones(N, bool)),
                               (np.where(interior, k, 0), 0.5 * dgt, interior)):
            o = owner[mask]
            ww = w[mask]
            rr = idx[mask]
            rows.append(rr)
            cols.append(o)
            vals.append(ww * (cm[o] - cp[o]))
            kp = nb[o, jp]
            km = nb[o, jm]
            sp = kp >= 0
            sm = km >= 0
            rows += [rr[sp], rr[sm]]
            cols += [kp[sp], km[sm]]
            vals += [(ww * cp[o])[sp], (-ww * cm[o])[sm]]
    if not want_jac:
        return res, None
    return res, (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals))
