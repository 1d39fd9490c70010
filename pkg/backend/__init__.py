"""
Kummer/Enriques verifier - backend package

- models: lattice, curve, fibration, torsor, projective, group and report data types
- services: exact arithmetic and one service per verification area, plus the suite runner
- handlers: command-line subcommands
- utils: configuration-independent helpers (errors, logging, caching, metrics, validation)
"""

__version__ = "1.0.0"
