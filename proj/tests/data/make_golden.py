# Copyright 2026 The PEBM Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""Writes the golden fixtures from a standalone implementation of the formats.

    python3 make_golden.py  (run from this directory)
"""

import struct

NX, NY, NZ = 4, 4, 3
T = 0.25


def fnv1a64(data):
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def fields():
    vx, vy, temp, rho = [], [], [], []
    for k in range(NZ):
        for i in range(NX):
            for j in range(NY):
                vx.append(i + 0.5 * j - 0.25 * k)
                vy.append((i * NY + j) / 8.0)
                temp.append(k - i * j / 16.0)
    for i in range(NX):
        for j in range(NY):
            rho.append(1.0 / (1 + i + j))
    return vx, vy, temp, rho


def snapshot():
    b = b"PEBM" + struct.pack("<IIIId", 1, NX, NY, NZ, T)
    for f in fields():
        b += struct.pack("<%dd" % len(f), *f)
    return b + struct.pack("<Q", fnv1a64(b))


def fmt(x):
    # Shortest round-trip text without a trailing ".0", matching std::to_chars.
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    if "e" in s:
        mant, exp = s.split("e")
        sign = exp[0] if exp[0] in "+-" else "+"
        digits = exp.lstrip("+-").rjust(2, "0")
        s = mant + "e" + sign + digits
    return s


COLUMNS = ["t", "norm_v_sq", "norm_T_sq", "norm_rho_sq", "grad_v_sq", "grad_T_sq", "grad_rho_sq",
           "rho_l5_pow5", "work_v", "work_T", "work_rho", "forcing_sq", "step_dissipation", "step_work",
           "step_advection", "step_numerical", "energy"]


def energy_csv():
    lines = [",".join(COLUMNS)]
    for n in range(4):
        t = n * 0.125
        norms = [1.0 / (n + 1), 0.5 ** n, 0.75]
        row = [t] + norms + [2.0 + n, 1.5, 0.25, 1e-3 * n, 0.5, -0.25, 0.125, 3.0,
                             0.0 if n == 0 else 0.3, 0.0 if n == 0 else 0.1, 0.0, 1e-9 * n]
        row.append(norms[0] + norms[1] + norms[2])
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    with open("golden_snapshot.pebm", "wb") as f:
        f.write(snapshot())
    with open("golden_energy.csv", "w") as f:
        f.write(energy_csv())
