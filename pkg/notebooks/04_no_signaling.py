# %% [markdown]
# # Locality audit
#
# Two parties receive one particle each and measure independently.  The
# harness records every message; A's outcome statistics must not depend on
# B's setting.  A deliberate leak shows that the test can detect signalling.

# %%
import math

from bellgen import Direction2
from bellgen.locality import SignalingFault, run_session, verify_no_signaling

A = Direction2(0.0)
B, B_PRIME = Direction2(math.pi / 8), Direction2(3 * math.pi / 8)
schedule = [(A, B if n % 2 == 0 else B_PRIME) for n in range(40_000)]

# %%
healthy = run_session("photon", schedule, seed=4)
report = verify_no_signaling(healthy.log_a, healthy.log_b)
print("messages:", healthy.transcript.count(),
      "inter-party during measurement:", healthy.transcript.inter_party_count())
print("healthy:", report.status, f"|z| = {report.statistic:.2f}")

# %%
leaky = run_session("photon", schedule, seed=4, fault=SignalingFault(0.05, B))
report = verify_no_signaling(leaky.log_a, leaky.log_b)
print("leaky:", report.status, f"|z| = {report.statistic:.2f}",
      "inter-party messages:", leaky.transcript.inter_party_count())
