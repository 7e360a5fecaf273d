"""
Modules package - numerical core (matrices, expressions, trajectories, distances)
"""
