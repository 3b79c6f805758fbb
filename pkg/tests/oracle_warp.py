"""Brute-force reference for spline warping, used only by tests.

Deliberately avoids numpy's linear algebra: the interpolation system is
solved by hand-rolled Gauss-Jordan elimination on Python floats and the
image is resampled with scalar loops, so agreement with the library is a
genuine two-route check rather than the same code called twice.
"""

import math


def kernel(r: float, order: int = 2) -> float:
    if order % 2 == 1:
        return r**order
    if r == 0.0:
        return 0.0
    return r**order * math.log(r)


def gauss_jordan_solve(matrix, rhs):
    """Solve A X = B with partial pivoting; all plain Python lists."""
    n = len(matrix)
    m = len(rhs[0])
    a = [list(matrix[i]) + list(rhs[i]) for i in range(n)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if abs(a[pivot][col]) == 0.0:
            raise ValueError("singular system")
        a[col], a[pivot] = a[pivot], a[col]
        for row in range(n):
            if row == col:
                continue
            factor = a[row][col] / a[col][col]
            if factor != 0.0:
                for k in range(col, n + m):
                    a[row][k] -= factor * a[col][k]
    return [[a[i][n + j] / a[i][i] for j in range(m)] for i in range(n)]


def fit(sources, dests, order: int = 2):
    """Exact polyharmonic interpolant mapping each source to its dest."""
    n = len(sources)
    size = n + 3
    matrix = [[0.0] * size for _ in range(size)]
    for i in range(n):
        for j in range(n):
            r = math.hypot(sources[i][0] - sources[j][0], sources[i][1] - sources[j][1])
            matrix[i][j] = kernel(r, order)
        matrix[i][n] = matrix[n][i] = 1.0
        matrix[i][n + 1] = matrix[n + 1][i] = sources[i][0]
        matrix[i][n + 2] = matrix[n + 2][i] = sources[i][1]
    rhs = [[d[0], d[1]] for d in dests] + [[0.0, 0.0]] * 3
    solution = gauss_jordan_solve(matrix, rhs)
    weights = solution[:n]
    affine = solution[n:]

    def predict(point):
        out = []
        for dim in range(2):
            acc = affine[0][dim] + affine[1][dim] * point[0] + affine[2][dim] * point[1]
            for j in range(n):
                r = math.hypot(point[0] - sources[j][0], point[1] - sources[j][1])
                acc += weights[j][dim] * kernel(r, order)
            out.append(acc)
        return out

    return predict


def backward_flow(source_points, dest_points, tau, nu):
    """flow[f][t] = (time, freq) input position for output pixel (t, f)."""
    predict = fit(dest_points, source_points)
    return [[predict((float(t), float(f))) for t in range(tau)] for f in range(nu)]


def bilinear(values, time, freq):
    """Edge-clamped bilinear lookup in a channel-major grid of lists."""
    nu = len(values)
    tau = len(values[0])
    time = min(max(time, 0.0), tau - 1.0)
    freq = min(max(freq, 0.0), nu - 1.0)
    t0 = int(math.floor(time))
    f0 = int(math.floor(freq))
    t1 = min(t0 + 1, tau - 1)
    f1 = min(f0 + 1, nu - 1)
    wt = time - t0
    wf = freq - f0
    return (
        values[f0][t0] * (1.0 - wf) * (1.0 - wt)
        + values[f1][t0] * wf * (1.0 - wt)
        + values[f0][t1] * (1.0 - wf) * wt
        + values[f1][t1] * wf * wt
    )


def warp_image(values, source_points, dest_points):
    """Warp a channel-major grid; returns a new grid of the same shape."""
    nu = len(values)
    tau = len(values[0])
    flow = backward_flow(source_points, dest_points, tau, nu)
    return [
        [bilinear(values, flow[f][t][0], flow[f][t][1]) for t in range(tau)]
        for f in range(nu)
    ]
