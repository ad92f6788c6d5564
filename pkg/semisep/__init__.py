"""
semisep Package
Exact decision of polynomial separation for semialgebraic sets in the plane
"""
__version__ = "1.0.0"
__description__ = "Decides strict and generic polynomial separation of plane semialgebraic sets"
