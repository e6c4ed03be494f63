"""Figure renderer for the qturbo CLI's CSV outputs.

Read-only over the simulator's documented file formats: every plotted
value exists verbatim in an input file; this package never recomputes
any physics.
"""
__version__ = "0.1.0"
