"""
Averaging the coordinates
=========================

Replace every P_i by the average Pbar and every Q_i by Qbar. The TV
between the i.i.d. products never exceeds a fixed multiple of the
original TV, while no bound in the other direction is possible.
"""

from tvhom import ProductInstance, homogenize, tv_homogenized_multinomial, tv_product_exact
from tvhom.harness import homogenization_ratio
from tvhom.tv import lift, lifted_instance
from tvhom.measure import power_convolve, t_functional, uniform_mixture
from tvhom import encode_pair

# the counterexample to a reverse bound: opposite biases average out
witness = ProductInstance([(0.5, 0.5)] * 2, [(0.7, 0.3), (0.3, 0.7)])
Pbar, Qbar = homogenize(witness.Ps), homogenize(witness.Qs)
print("Pbar", Pbar.probs, "Qbar", Qbar.probs)
print("TV(vec) =", tv_product_exact(witness))
print("TV(hom) =", tv_homogenized_multinomial(Pbar, Qbar, witness.n))

# i.i.d. products only depend on letter counts, so a multinomial sum suffices.
# n = 200 coordinates on 3 letters is 20301 count vectors instead of 3**200 words
print("n=200:", tv_homogenized_multinomial((0.3, 0.3, 0.4), (0.32, 0.3, 0.38), 200))

# a generic instance and its ratio
inst = ProductInstance([(0.1, 0.9), (0.4, 0.6), (0.8, 0.2)], [(0.15, 0.85), (0.5, 0.5), (0.7, 0.3)])
print("ratio TV(hom)/TV(vec) =", homogenization_ratio(inst))

# the lift: one coordinate index chosen uniformly, then a letter from P_i.
# Its encoding is the average of the coordinate encodings
lp = lift(inst)
bar = uniform_mixture([encode_pair(P, Q) for P, Q in inst.pairs()])
print("lift encodes the mixture:", encode_pair(lp.lambda_p, lp.lambda_q).allclose(bar, 1e-12, 1e-12))

# forgetting the index can only shrink TV
print("TV(hom)      =", tv_homogenized_multinomial(homogenize(inst.Ps), homogenize(inst.Qs), inst.n))
print("T(bar^{*n})  =", t_functional(power_convolve(bar, inst.n)))
print("TV(lift^n)   =", tv_product_exact(lifted_instance(inst)))
