"""Transferring left invariance to right semi-invariance on the affine space
over F_5.

G is the group of maps x -> ax + b on F_5 (order 20), the stabiliser of 0 is
the dilation group, and the coordinates are the translations. For the
translation subgroup H all transfer conditions hold, every coset map has an
H-inverse, and left invariance of the uniform measure becomes exact
semi-invariance. Using the dilations as H fails: they fix 0.
"""

import cellspaces as cs


def main() -> None:
    sp = cs.affine_space(5)
    print(
        f"{sp.name}: |G| = {len(sp.group.elements())}, "
        f"|G0| = {len(sp.stabilizer)}, {len(sp.cosets())} cosets"
    )

    translations = cs.affine_translations(sp)
    report = cs.check_transfer_conditions(sp, translations)
    print(f"\nH = translations: conditions pass = {report.passed}")
    for check in report.checks:
        print(f"  {check.name}: {'ok' if check.ok else check.witness}")

    mu = cs.FAMeasure.uniform(sp.full_window())
    print("\ninverse-pair witnesses and invariance, coset by coset:")
    for coset in sp.cosets():
        h = cs.inverse_pair_witness(sp, coset, translations, sp.points())
        verdict = cs.transfer_invariance_check(sp, mu, coset, h)
        print(
            f"  coset {sp.group.describe_element(coset.key)}: "
            f"h = {sp.group.describe_element(h.payload)}, "
            f"mu <| coset == h -> mu: {verdict.passed}"
        )

    assert cs.check_semi_invariance(sp, mu).passed
    print("\nuniform measure is exactly semi-invariant under every coset map")

    dilations = cs.affine_dilations(sp)
    bad = cs.check_transfer_conditions(sp, dilations)
    print(f"\nH = dilations: conditions pass = {bad.passed}")
    for check in bad.failures():
        print(f"  {check.name}: {check.witness}")


if __name__ == "__main__":
    main()
