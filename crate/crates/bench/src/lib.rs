//! Fixtures shared by the criterion benches.

use vertexq_core::qverify::{Construction, Method};
use vertexq_core::{Model, ModelParams};

/// Model and Baxter construction at `l = 1, N = 3, r = 4`.
pub fn spin_one_chain() -> (Model, Construction) {
    let m = Model::new(ModelParams::new(3, 2, 4, 1)).expect("preset parameters are valid");
    let c = Construction::new(&m, Method::Baxter).expect("Baxter accepts odd N");
    (m, c)
}
