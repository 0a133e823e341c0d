"""Print the closed rational forms of Phi(-z, -n, 1/2) with their palindromy check.

Usage: python3 scripts/print_closed_forms.py [--max-n 10] [--emit latex|coeffs]
"""
import argparse

from catalankit.lerch import derive_closed_form, emit_coeffs, emit_latex


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--emit", choices=("latex", "coeffs"), default="coeffs")
    args = ap.parse_args()
    for n in range(args.max_n + 1):
        form = derive_closed_form(n)
        form.check()
        text = emit_latex(form) if args.emit == "latex" else emit_coeffs(form)
        print(f"n={n:<3} {text}")


if __name__ == "__main__":
    main()
