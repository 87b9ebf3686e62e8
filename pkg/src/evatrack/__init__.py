"""Pursuit-evasion simulation toolkit with a mixture-density adversary
state predictor trained under partial observability."""

__version__ = "0.1.0"
