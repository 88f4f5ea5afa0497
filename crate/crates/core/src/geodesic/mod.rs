//! Geodesic, transport and comparison flows on top of a small Runge-Kutta
//! integrator with blow-up detection.

mod euler_flow;
mod flows;
mod incompleteness;
mod ode;
mod riccati;
mod transport;

pub use euler_flow::{euler_arnold_integrate, euler_arnold_system, rotation_error, EulerArnoldRun};
pub use flows::{energy, geodesic_rhs, warped_geodesic_rhs, GeodesicState};
pub use incompleteness::{
    busemann_warped, incompleteness_demo, lightlike_ds, lightlike_s, lightlike_singular_time, s_residual,
    timelike_ds, timelike_s, timelike_singular_time, warped_causal_run, CausalKind, CausalRun, ControlRun,
    IncompletenessReport, BREAKDOWN_TOLERANCE, CONTROL_SPAN,
};
pub use ode::{integrate, IntegratorConfig, Method, OdeSystem, RhsFn, Status, Trajectory};
pub use riccati::{
    riccati_blowup_time, riccati_closed_form, riccati_experiment, riccati_system, RiccatiLeg, RiccatiReport, RiccatiRun,
    BOUND_SLACK, RICCATI_BLOWUP_THRESHOLD,
};
pub use transport::{
    horizontal_geodesic_defect, horizontality_check, parallel_transport, planar_angle, transport_along_geodesic,
    verticality_defect, CurvePath, FnCurve, GeodesicPath,
};
