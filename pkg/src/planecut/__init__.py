"""Minimum quotient cuts in planar graphs: exact, approximate and hardness tooling."""
