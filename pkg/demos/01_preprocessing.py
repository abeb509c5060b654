"""From raw samples to a compact symbol stream.

Walks the three preprocessing stages one at a time: value-to-bin
discretization, hysteresis debouncing at bin boundaries, and
logarithmic run compression.  Everything prints; no files are written.
"""

import numpy as np

from behaviorforest import (
    BreakpointSpec,
    EngineConfig,
    HysteresisFilter,
    copies_for_run_length,
    discretize,
    gaussian_breakpoints,
    make_pipeline,
    unify_symbols,
    validate_stream_header,
)


def main() -> None:
    # --- Stage 1: discretization -----------------------------------------
    # Breakpoints can come from equiprobable bins under a standard normal...
    bp = gaussian_breakpoints(4)
    print("equiprobable breakpoints for 4 bins:", np.round(bp, 4))

    # ...or be chosen by hand.  Bins are half-open: a value sitting exactly
    # on a breakpoint belongs to the bin above it.
    bp = (-0.5, 0.5)
    for v in (-1.0, -0.5, 0.0, 0.5, 1.0):
        print(f"  value {v:+.2f} -> bin {discretize(v, bp)}")

    # --- Stage 2: hysteresis ----------------------------------------------
    # A signal hovering at a boundary flickers between bins.  The filter
    # only lets a bin change through once the value has pushed past the
    # breakpoint by a fraction of the committed bin's width.
    rng = np.random.default_rng(7)
    hover = 0.5 + 0.03 * rng.standard_normal(20)
    plain = [discretize(v, bp) for v in hover]

    filt = HysteresisFilter(bp, margin=0.1)
    debounced = [filt.step(v) for v in hover]
    print("\nsignal hovering at the 0.5 boundary:")
    print("  plain binning :", plain, f"({len(set(plain))} distinct bins)")
    print("  with hysteresis:", debounced, f"({len(set(debounced))} distinct bins)")

    # --- Stage 3: fusion and run compression ------------------------------
    # Two channels with 3 bins each fuse into one symbol out of 9.
    sizes = (3, 3)
    for pair in [(0, 0), (1, 2), (2, 2)]:
        print(f"channel bins {pair} -> unified symbol {unify_symbols(pair, sizes)}")

    # A run of L identical symbols is kept as ceil(log10 L) copies, so a
    # ten-minute idle stretch costs about as much as a one-minute one.
    print("\nrun length -> copies kept (base 10):")
    for length in (1, 5, 10, 99, 100, 5000):
        print(f"  {length:5d} -> {copies_for_run_length(length, 10)}")

    # --- All together ------------------------------------------------------
    # The pipeline chains the stages and reports, per reduced symbol, the
    # raw index span it covers and the original run length.
    config = EngineConfig(BreakpointSpec(((-0.5, 0.5), (-0.5, 0.5))))
    pipeline = make_pipeline(validate_stream_header(2, config, "demo"))
    values = np.zeros((300, 2))
    values[100:120, 0] = 1.0  # channel 1 steps high for 20 samples
    values[100:120, 1] = -1.0  # channel 2 mirrors it

    reduced = pipeline.process_batch(values)
    reduced += pipeline.flush()
    print("\nreduced stream for a 300-sample recording with one 20-sample event:")
    for r in reduced:
        print(
            f"  symbol {r.symbol}  raw span {r.raw_span}  "
            f"covers a run of {r.run_length_raw}"
        )


if __name__ == "__main__":
    main()
