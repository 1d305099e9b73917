"""Iterated residues of CEGM amplitudes along factorization channels."""

import json

from tropfact.amplitudes import verify_factorization
from tropfact.factorization import ChannelSpec


def main():
    for text in ("12|34|56", "12|34|567", "123|45|6|7"):
        rep = verify_factorization(ChannelSpec.parse(text), max_orders=1).to_json()
        rep.pop("seconds")
        keep = ("channel", "propagators", "separable", "matches", "product_constant")
        print(json.dumps({k: rep[k] for k in keep}, indent=1))


if __name__ == "__main__":
    main()
