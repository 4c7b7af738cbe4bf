"""strsat: a satisfiability solver for quantifier-free string constraints.

The package decides conjunctions and Boolean combinations of word
(dis)equations, regular constraints, length constraints and the common
string predicates, reading the SMT-LIB 2.6 string fragment.
"""

__all__ = ["solve_script", "solve_text", "Verdict"]
__version__ = "0.1.0"


def __getattr__(name):
    if name in __all__:
        from strsat import driver

        return getattr(driver, name)
    raise AttributeError(name)
