from hypothesis import HealthCheck, settings

# Numeric property tests vary in per-example cost; deadline off, derandomized
# so CI runs are reproducible.
settings.register_profile(
    "numeric",
    deadline=None,
    derandomize=True,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")
