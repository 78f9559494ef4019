"""Tournament structures, keys and smooth-structure tools."""
