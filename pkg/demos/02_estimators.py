"""How the throughput estimators react to a bandwidth drop.

Three smoothing rules sit underneath the logics: the weighted moving
estimate, the harmonic mean over a window and the drop-reactive sliding
average. Feed each one the same sequence of measurements (steady at 2000
kbps, then a sudden fall to 300) and watch how fast they follow.
"""

from abrbench.adaptation.estimators import dashjs_estimate, harmonic_mean, sliding_average

samples = [2000.0] * 8 + [300.0] * 6

weighted = samples[0]
print(" step  measured  weighted  harmonic20  sliding5")
for i, w in enumerate(samples):
    weighted = dashjs_estimate(weighted, w)
    window = samples[max(0, i - 19): i + 1]
    print(f"{i:5d} {w:9.0f} {weighted:9.1f} {harmonic_mean(window):11.1f} "
          f"{sliding_average(samples[: i + 1]):9.1f}")

# The weighted estimate closes 65% of the remaining gap each step, so the
# error shrinks by exactly 0.35 per measurement.
b, target = 1000.0, 1200.0
errors = []
for _ in range(5):
    b = dashjs_estimate(b, target)
    errors.append(target - b)
print("error after each step:", [f"{e:.4f}" for e in errors])
print("ratios:", [f"{errors[k + 1] / errors[k]:.3f}" for k in range(4)])
