"""Pure-numpy hit-and-run kernel; same contract as the compiled one."""
import numpy as np

REFRESH = 64


def hit_and_run(A, b, T, y0, gauss, unif, burn, thin, out):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    y = np.array(y0, dtype=float)
    count = out.shape[0]
    total = burn + thin * count
    dirs = gauss[:total] @ np.asarray(T, dtype=float).T
    unbounded = 0
    kept = 0
    s = None
    for step in range(total):
        if step % REFRESH == 0:
            s = b - A @ y
        u = dirs[step]
        au = A @ u
        sp = np.maximum(s, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = sp / au
        pos, neg = au > 0.0, au < 0.0
        hi = ratio[pos].min() if pos.any() else np.inf
        lo = ratio[neg].max() if neg.any() else -np.inf
        if not (np.isfinite(lo) and np.isfinite(hi)):
            unbounded += 1
            t = 0.0
        elif hi <= lo:
            t = 0.0
        else:
            t = lo + (hi - lo) * unif[step]
        y += t * u
        s = s - t * au
        if step >= burn and (step - burn + 1) % thin == 0:
            out[kept] = y
            kept += 1
    return unbounded
