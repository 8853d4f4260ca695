"""First-order syntax, weak arithmetic theories, checkable derivations and
the bounded-instance decision procedure."""
