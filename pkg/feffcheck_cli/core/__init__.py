"""
Core numerics for feffcheck.
Fields, quadrature, growth functions, Stummel moduli, maximal functions and
BMO, the inequality harness and the counterexample scenario.
"""
