"""
HTTP surface over the solver, pipeline, verification and simulation
"""
