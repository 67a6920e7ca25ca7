from fuzzynorm.sampling import plain


def reproduces(replayed, witness) -> bool:
    """A replay reproduces a witness when it still fails with identical values."""
    violated, values = replayed
    return bool(violated) and plain(values) == witness.values
