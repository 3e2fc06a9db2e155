"""Regenerate the vendored FCIDUMP fixtures.

Linear hydrogen chains, STO-3G, 1.4 bohr spacing, restricted Hartree-Fock
orbitals, no frozen core. Orbitals are written in canonical RHF order.

    python3 generate_fixtures.py

Requires pyscf (tested with 2.14.0).
"""
import json

from pyscf import ao2mo, fci, gto, scf
from pyscf.tools import fcidump

SPACING = 1.4  # bohr


def chain(n_atoms):
    atoms = [("H", (0.0, 0.0, i * SPACING)) for i in range(n_atoms)]
    mol = gto.M(atom=atoms, basis="sto-3g", unit="Bohr", verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    return mol, mf


def main():
    refs = {}
    for n_atoms in (2, 4):
        mol, mf = chain(n_atoms)
        name = f"h{n_atoms}_sto3g_1.4bohr.fcidump"
        fcidump.from_scf(mf, name, tol=1e-15)
        norb = mf.mo_coeff.shape[1]
        h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
        eri = ao2mo.full(mol, mf.mo_coeff)
        e_fci, _ = fci.direct_spin1.kernel(h1, eri, norb, mol.nelectron, ecore=mol.energy_nuc())
        refs[name] = {"e_hf": mf.e_tot, "e_fci": e_fci, "e_nuc": mol.energy_nuc()}
    with open("reference_energies.json", "w") as f:
        json.dump(refs, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
