//! Reflective flares: chains of iris patches on the line through the optical
//! centre, moving opposite to the light.

mod chain;
mod iris;
pub(crate) mod manifest;
mod output;

pub use self::chain::{
    caustics_opacity, clip_iris, place_irises, render_iris, render_reflective, render_reflective_unclipped, Caustics,
    ClipSpec, IrisChain,
};
pub use self::iris::{render_lattice_iris, render_lattice_patch, CellShape, Iris, IrisShape, MatrixLightSpec, Ring};
pub use self::manifest::{CausticsSpec, IrisEntry, ReflectInstance, ReflectJitter, ReflectManifest};
pub use self::output::{plan_reflect, synth_reflect, REFLECT_DIR};
