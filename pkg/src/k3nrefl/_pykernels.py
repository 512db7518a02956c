"""Pure-Python integer kernels.

Vectors are sequences of ints, matrices are sequences of rows. Results are
returned as tuples. Python ints never overflow, so these are the reference
implementations the compiled module falls back on.
"""


def _rows(m):
    rows = tuple(tuple(r) for r in m)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def _width(rows) -> int:
    return len(rows[0]) if rows else 0


def matvec(m, x):
    rows, x = _rows(m), tuple(x)
    if _width(rows) != len(x):
        raise ValueError("dimension mismatch")
    return tuple(sum(a * b for a, b in zip(row, x)) for row in rows)


def matmul(a, b):
    a, b = _rows(a), _rows(b)
    if _width(a) != len(b):
        raise ValueError("dimension mismatch")
    cols = tuple(zip(*b))
    return tuple(tuple(sum(p * q for p, q in zip(row, col)) for col in cols) for row in a)


def bilinear(gram, x, y):
    gram, x, y = _rows(gram), tuple(x), tuple(y)
    if len(gram) != len(x) or _width(gram) != len(y):
        raise ValueError("dimension mismatch")
    total = 0
    for xi, row in zip(x, gram):
        if xi:
            total += xi * sum(g * yj for g, yj in zip(row, y) if g)
    return total


def is_isometry(m, gram):
    m, gram = _rows(m), _rows(gram)
    if len(m) != len(gram) or _width(m) != len(gram) or _width(gram) != len(gram):
        raise ValueError("dimension mismatch")
    return matmul(tuple(zip(*m)), matmul(gram, m)) == gram
