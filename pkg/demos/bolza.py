"""The default representation: Bolza surface generators and their lengths."""

import math

from sysgirth.geometry import commutator_check, estimate_milnor_schwarz, load_rep, translation_length

rep = load_rep()
print("relator residual", rep.relator_residual())
print("|u - v| up to sign", commutator_check(rep))
for c in "xyab":
    print(c, translation_length(rep.word_matrix(c)))
print("2 arccosh(1 + sqrt 2) =", 2 * math.acosh(1 + math.sqrt(2)))
print(estimate_milnor_schwarz(rep, 4))
