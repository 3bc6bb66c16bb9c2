"""2-to-2 games to unique games by splitting each constraint into its two permutations."""

from __future__ import annotations

from gapforge.errors import PreconditionError
from gapforge.games import Game, OneToOne, TwoToTwo, WeightedGame


def to_unique_games(g: Game | WeightedGame) -> Game | WeightedGame:
    """Edge ``(u, v, D(pi1, pi2))`` becomes ``(u, v, pi1)`` then ``(u, v, pi2)``.

    A colouring satisfies the 2-to-2 edge iff it satisfies exactly one of the
    two halves, and it can never satisfy both, so every satisfied fraction
    halves. Weighted games keep the weight on both halves.
    """
    game = g.game if isinstance(g, WeightedGame) else g
    edges = []
    for i, (u, v, c) in enumerate(game.edges):
        if not isinstance(c, TwoToTwo):
            raise PreconditionError(f"edge {i} is not 2-to-2")
        edges += [(u, v, OneToOne(c.pi1)), (u, v, OneToOne(c.pi2))]
    out = Game(game.num_vertices, game.q, tuple(edges))
    if isinstance(g, WeightedGame):
        return WeightedGame(out, tuple(w for w in g.weights for _ in range(2)))
    return out
