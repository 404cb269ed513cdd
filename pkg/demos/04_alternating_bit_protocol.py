"""
The alternating bit protocol
============================

Build the timed protocol, hide its internal communications, minimize and
compare with the external specification.  With this protocol model the
verdict is false; the diagnostics show where the protocol gets stuck.
"""

from aptc_timed import abp
from aptc_timed import terms as T

for mode, horizon in ((T.DRT, 30), (T.DAT, 40)):
    params = abp.AbpParams(data=("d1", "d2"), mode=mode, horizon=horizon)
    report = abp.verify_abp(params)
    print(mode, report.text())
    for line in abp.abp_diagnostics(params):
        print("   ", line)

# dropping the acknowledgements makes no difference to the verdict
print(abp.verify_abp(abp.AbpParams(), sabotage=True).verdict)
