"""Pure-Python rank of an integer matrix modulo a prime."""


def rank_mod_p(data, nrows: int, ncols: int, p: int) -> int:
    """Rank of the row-major ``nrows x ncols`` matrix in ``data`` over GF(p)."""
    rows = [[x % p for x in data[i * ncols:(i + 1) * ncols]] for i in range(nrows)]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        top = rows[rank]
        inv = pow(top[c], p - 2, p)
        top = [x * inv % p for x in top]
        rows[rank] = top
        for i in range(rank + 1, nrows):
            f = rows[i][c]
            if f:
                row = rows[i]
                rows[i] = [(a - f * b) % p for a, b in zip(row, top)]
        rank += 1
        if rank == nrows:
            break
    return rank
