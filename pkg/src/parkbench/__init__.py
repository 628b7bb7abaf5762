"""parkbench: a desk-scale workbench for multi-shot parking trajectory planning.

Pipeline: procedural scenario generation with a kinematic expert driver,
dataset construction (motion-state labels, future windows, BEV occupancy),
Fourier target encoding and token serialization, a dual-branch autoregressive
planner trained on the built-in reverse-mode autodiff engine, and a trajectory
/ gear-shift evaluation metric suite.
"""

__version__ = "0.1.0"
