"""Normal 3-pseudomanifolds: g2, local moves, folding surgery and reduction certificates."""
