"""Build a transmitter frequency plan and sanity-check a link config."""

from fomlink import SystemConfig, build_frequency_plan, eta, validate_config

config = SystemConfig(
    n=128,
    m=256,
    bandwidth_hz=20e6,
    delta_f_hz=15e3,
    symbol_rate=15e3,
    carrier_hz=2e9,
)

plan = build_frequency_plan(config)
print(f"transmitters: {plan.tx_count}")
print(f"first offsets (Hz): {plan.offsets[:4]} ...")
print(f"occupied extra band: {plan.delta_b / 1e6:.3f} MHz")
print(f"relative expansion eta = {eta(config):.5f}")
print(f"index bits per interval: {config.index_bit_count}")
print(f"symbol bits per interval: {config.symbol_bit_count}")
print()

# Small offsets against a large band: the checker stays quiet.
report = validate_config(config)
print("clean config ->", "ok" if report.ok else report.hard_errors)

# Now make the offsets large enough to matter relative to the carrier.
aggressive = SystemConfig(
    n=2,
    m=4,
    bandwidth_hz=20e6,
    delta_f_hz=1e6,
    symbol_rate=1e6,
    carrier_hz=100e6,
)
report = validate_config(aggressive)
for warning in report.soft_warnings:
    print("warning:", warning)

# And something outright broken.
broken = SystemConfig(
    n=3,
    m=4,
    bandwidth_hz=20e6,
    delta_f_hz=15e3,
    symbol_rate=15e3,
    carrier_hz=2e9,
)
report = validate_config(broken)
for error in report.hard_errors:
    print("error:", error)
