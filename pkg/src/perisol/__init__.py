""" Perisol
    Positive periodic solutions of impulsive periodic delay differential systems
"""

__version__ = "0.1.0"
