"""
sparsedecomp
Sparse decomposition of graphs: degree gaps, dense spots, locally dense regularity,
avoiding sets, decomposition verifiers and tree embedding procedures.
"""

__version__ = "0.2.0"
