"""Uniserial modules of sl(2) ⋉ V(m), computed exactly."""
