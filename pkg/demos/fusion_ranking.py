"""
Shallow fusion and weight search
================================

Rescore a handful of decoding hypotheses with a language model and a
coverage reward, then grid-search the mixing weights against a scoring
callback.
"""

from specaug import FusionWeights, HypothesisScore, fused_score, grid_search_fusion

# Three competing transcripts for one utterance.  The acoustic model
# prefers the first; the language model strongly prefers the second.
hyps = {
    "the cat sat":  HypothesisScore(asr_logprob=-1.20, lm_logprob=-9.0, coverage=10.0),
    "the cat sang": HypothesisScore(asr_logprob=-1.35, lm_logprob=-2.0, coverage=10.0),
    "the cut sat":  HypothesisScore(asr_logprob=-1.90, lm_logprob=-8.5, coverage=9.0),
}

for label, weights in [
    ("acoustic only", FusionWeights(lm_weight=0.0, coverage_weight=0.0)),
    ("with lm 0.35", FusionWeights(lm_weight=0.35, coverage_weight=0.0)),
    ("lm + coverage", FusionWeights(lm_weight=0.35, coverage_weight=0.05)),
]:
    ranked = sorted(hyps, key=lambda h: fused_score(hyps[h], weights), reverse=True)
    scores = ", ".join(f"{h}: {fused_score(hyps[h], weights):.3f}" for h in ranked)
    print(f"{label:14s} -> {scores}")

# grid_search_fusion tries every (lm, coverage) pair and keeps the one
# whose callback value is lowest; ties break toward smaller weights.
# Here the callback is a mock dev-set error rate with a known minimum.
def dev_error(lm_weight, coverage_weight):
    return (lm_weight - 0.3) ** 2 + (coverage_weight - 0.05) ** 2

candidates = [(lm, cov) for lm in (0.0, 0.1, 0.2, 0.3, 0.4) for cov in (0.0, 0.05, 0.1)]
best_lm, best_cov = grid_search_fusion(candidates, dev_error)
print(f"\nbest weights from the grid: lm={best_lm} coverage={best_cov}")
