#!/usr/bin/env python3
# Licensed under the Apache License, Version 2.0.
"""Regenerate the committed FCIDUMP fixtures with PySCF (STO-3G, RHF orbitals).

Integrals are written over the full orbital space; frozen-core reduction is
applied by the C++ side at load time. The comment block at the top of every
file records the geometry, basis, suggested frozen orbitals and PySCF version.

    python3 fixtures/generate_fixtures.py --out fixtures
"""
import argparse
import math
import os
import sys

import numpy
import pyscf
from pyscf import ao2mo, gto, scf

HOH_ANGLE = 104.4776

MOLECULES = {
    # name: (grid in pm, frozen spatial orbitals used by the scans)
    "h2": ([50, 74, 100, 150, 200], []),
    "bh": ([100, 125, 150, 175, 200, 225, 250, 275, 300], []),
    "h2o": ([75, 100, 125, 150, 175, 200], [0]),
    "beh2": ([100, 125, 150, 175, 200, 225, 250, 275, 300], [0]),
}


def geometry(name, r):
    if name == "h2":
        return f"H 0 0 0; H 0 0 {r}"
    if name == "bh":
        return f"B 0 0 0; H 0 0 {r}"
    if name == "beh2":
        return f"Be 0 0 0; H 0 0 {r}; H 0 0 {-r}"
    if name == "h2o":
        half = math.radians(HOH_ANGLE / 2.0)
        x, z = r * math.sin(half), r * math.cos(half)
        return f"O 0 0 0; H {x} 0 {z}; H {-x} 0 {z}"
    raise ValueError(name)


def write_fcidump(path, header_comments, h1, eri, nelec, ecore):
    norb = h1.shape[0]
    tol = 1e-15
    with open(path, "w") as f:
        for line in header_comments:
            f.write(f"# {line}\n")
        f.write(f" &FCI NORB={norb},NELEC={nelec},MS2=0,\n")
        f.write("  ORBSYM=" + "1," * norb + "\n")
        f.write("  ISYM=1,\n &END\n")
        for i in range(norb):
            for j in range(i + 1):
                for k in range(norb):
                    for l in range(k + 1):
                        if i * (i + 1) // 2 + j < k * (k + 1) // 2 + l:
                            continue
                        v = eri[i, j, k, l]
                        if abs(v) > tol:
                            f.write(f"{v: .16e} {i + 1:4d} {j + 1:4d} {k + 1:4d} {l + 1:4d}\n")
        for i in range(norb):
            for j in range(i + 1):
                v = h1[i, j]
                if abs(v) > tol:
                    f.write(f"{v: .16e} {i + 1:4d} {j + 1:4d}    0    0\n")
        f.write(f"{ecore: .16e}    0    0    0    0\n")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=os.path.dirname(os.path.abspath(__file__)))
    parser.add_argument("--molecules", nargs="*", default=list(MOLECULES))
    args = parser.parse_args()

    failures = 0
    for name in args.molecules:
        grid, frozen = MOLECULES[name]
        dm = None
        for r_pm in grid:
            r = r_pm / 100.0
            mol = gto.M(atom=geometry(name, r), basis="sto-3g", unit="Angstrom", verbose=0)
            mf = scf.RHF(mol)
            mf.conv_tol = 1e-12
            mf.max_cycle = 500
            mf.kernel(dm0=dm)
            if not mf.converged:
                print(f"warning: SCF not converged for {name} R={r}", file=sys.stderr)
                failures += 1
                continue
            dm = mf.make_rdm1()
            c = mf.mo_coeff
            h1 = c.T @ mf.get_hcore() @ c
            eri = ao2mo.restore(1, ao2mo.full(mol, c), c.shape[1])
            comments = [
                f"molecule: {name}",
                f"geometry: {geometry(name, r)} (Angstrom)",
                f"R_angstrom: {r:.4f}",
                "basis: sto-3g",
                f"frozen: {','.join(str(x) for x in frozen) if frozen else 'none'}",
                f"e_rhf: {mf.e_tot:.12f}",
                f"generator: pyscf {pyscf.__version__}, numpy {numpy.__version__}",
            ]
            path = os.path.join(args.out, f"{name}_sto3g_{r_pm}.fcidump")
            write_fcidump(path, comments, h1, eri, mol.nelectron, mol.energy_nuc())
            print(f"wrote {path}  E_RHF = {mf.e_tot:.10f}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
