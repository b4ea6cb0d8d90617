"""Simulation of a delayed-choice which-way experiment with an atom in a cavity.

Modules
-------
quantum       dense states, operators, RK4 closed and Lindblad evolution
model         three-level atom + cavity mode: Hamiltonians, pulses, phases
spectroscopy  vacuum-Rabi transmission, probe spectra, photodetector
circuit       closed-form two-qubit reference model
experiment    time-resolved trial simulation, seeded batches, fringe analysis
config, cli   configuration files and the ``cavity-eraser`` command
"""

__version__ = "0.1.0"
