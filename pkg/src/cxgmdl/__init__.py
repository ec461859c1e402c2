"""Construction grammars, their lexicalized counterparts, and MDL comparison."""
