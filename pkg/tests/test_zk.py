from fas import group as g
from fas import ipfe, nizk
from fas import protocol as P

from zk_oracle import simulate


def _pp(rng, ell=4, bound=10**6):
    crs, td = nizk.setup_with_trapdoor(128, rng)
    pp = P.PublicParams(crs, ipfe.gen(128, ell + 1, bound), P.Mode.STRONG)
    return pp, td


def test_simulated_view_verifies_and_decrypts(rng):
    pp, td = _pp(rng)
    x, y = [1, 2, 3, 4], [5, 6, 7, 8]
    X = pp.relation.statement(x)
    v = sum(a * b for a, b in zip(x, y))
    sim = simulate(pp, td, X, y, v, rng)
    assert P.ad_verify(pp, X, sim.advt)
    assert P.aux_verify(pp, sim.advt, y, sim.aux)
    assert ipfe.decrypt(sim.key, sim.advt.ct, P.extended(y, sim.aux.pi_y), pp.bound) == v


def test_zero_value_gives_plain_pi(rng):
    pp, td = _pp(rng)
    y = [3, 1, 4, 1]
    sim = simulate(pp, td, pp.relation.statement([0] * 4), y, 0, rng)
    assert sim.aux.pi_y == g.inner_product(sim.t, y)


def test_change_of_variables(rng):
    pp, td = _pp(rng)
    x, y = [9, 8, 7, 6], [1, 2, 3, 4]
    v = sum(a * b for a, b in zip(x, y))
    sim = simulate(pp, td, pp.relation.statement(x), y, v, rng)
    shifted = tuple((a + b) % g.ORDER for a, b in zip(sim.t, x))
    real = P.aux_gen(pp, sim.advt, P.SellerState(sim.msk, shifted), y)
    assert real.pi_y == sim.aux.pi_y
    assert real.aux_y == sim.aux.aux_y
