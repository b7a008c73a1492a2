"""Independent reference computations built on sympy."""

import sympy


def jordan_blocks(rows):
    """Sizes of the Jordan blocks of a square rational matrix, via sympy's jordan_form."""
    n = len(rows)
    if n == 0:
        return []
    m = sympy.Matrix(rows)
    if m.is_zero_matrix:
        return [1] * n
    J = m.jordan_form(calc_transform=False)
    sizes, run = [], 1
    for i in range(n - 1):
        if J[i, i + 1] == 1:
            run += 1
        else:
            sizes.append(run)
            run = 1
    sizes.append(run)
    return sizes


def multiplicities(sizes, L):
    a = [0] * L
    for s in sizes:
        a[s - 1] += 1
    return tuple(a)
