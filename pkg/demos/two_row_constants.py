"""Constants of the rank-two n^(2) module with G_m = <(2, -2), (3, 2)>.

Each closed form is printed next to the value obtained by normalizing the
defining word and evaluating it on the weight space.
"""

from tgwa.orbit import n2_point
from tgwa.qwa import (c1_inverse_formula, c2_inverse_formula, induced_constants,
                      wrap_constant_formula)
from tgwa.scalars import ParameterEnv, Scalar


def main():
    env = ParameterEnv(10, {"q1": "e^6", "q2": "e", "l12": "e"})
    a, b = (2, -2), (3, 2)
    pt = n2_point(Scalar.param("a"), env)
    c = induced_constants(a, b, pt, env)
    lam = pt.alpha[1]
    print("basis a = %s, b = %s over Q(e), e^10 = 1" % (a, b))
    print("d1 = %d, d2 = %d, s = %d, |S| = %d" % (c.d1, c.d2, c.s, c.d1 * c.d2))
    rows = [("nu", c.nu, None),
            ("C1", c.c1, c1_inverse_formula(a, b, lam, env, printed=True).inverse()),
            ("C2", c.c2, c2_inverse_formula(a, b, lam, env, printed=True).inverse()),
            ("wrap", c.wrap, wrap_constant_formula(c.s, c.d2, lam, env, printed=True))]
    for name, value, alt in rows:
        print("%-5s closed form  %s" % (name, env.fmt(value)))
        print("%-5s oracle       %s" % ("", env.fmt(c.oracle[name.lower()])))
        if alt is not None:
            agree = "agrees" if alt == c.oracle[name.lower()] else "differs"
            print("%-5s uncorrected  %s (%s)" % ("", env.fmt(alt), agree))


if __name__ == "__main__":
    main()
