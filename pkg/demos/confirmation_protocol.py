"""
Convincing a third party
========================

The receiver hands over a package and runs the four-move exchange.  A
receiver that lies about mu is caught.
"""

import dataclasses

from dtms.receiver import ConfirmingParty, Prover, third_party_check
from dtms.sim import SimConfig, simulate

res = simulate(SimConfig(seed=5))
pkg, params = res.package, res.params
print("package:", pkg)
print("congruence holds:", third_party_check(pkg, res.board.y_s, params))

# one exchange, move by move
c = ConfirmingParty(pkg.u_s, pkg.mu, res.receiver.y, params)
r = Prover(res.receiver, pkg.u_s, params)
w = c.commit()
beta, gamma = r.respond(w)
u, v = c.receive_response(beta, gamma)
alpha = r.open(u, v)
print(f"C->R w={w}\nR->C beta={beta} gamma={gamma}\nC->R u={u} v={v}\nR->C alpha={alpha}")
print("failed check:", c.finish(alpha))

# a dishonest mu
bad = dataclasses.replace(pkg, mu=pkg.mu * params.g % params.p)
c = ConfirmingParty(bad.u_s, bad.mu, res.receiver.y, params)
r = Prover(res.receiver, bad.u_s, params)
beta, gamma = r.respond(c.commit())
print("with a forged mu, failed check:", c.finish(r.open(*c.receive_response(beta, gamma))))
