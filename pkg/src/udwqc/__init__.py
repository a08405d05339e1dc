"""Field-mediated quantum logic gates and channels in the coherent-state encoding."""

from .operators import Operator, Spectrum, entropy, kron, partial_trace, trace_norm
from .gates import build_gate, projector, qubit_mediated_channel, verify_truth_table
from .field import (
    Displacement,
    FockRep,
    ModelParams,
    displacement_reduce,
    fock_realize,
    make_model,
    overlap,
)
from .udw import (
    CoherentJointState,
    CoherentKetState,
    UdwGate,
    coherent_projector,
    realize,
    udw_gate,
    udw_swap,
)
from .channels import (
    BackendMismatchError,
    Channel,
    build_channel,
    qst_output_state,
    superoperator_to_choi,
)
from .metrics import (
    DiamondResult,
    SweepRow,
    capacity_n1,
    coherent_information,
    diamond_distance,
    unitary_diamond_oracle,
)

__version__ = "0.1.0"
