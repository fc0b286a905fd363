//! Runs every code snippet in the guide as a doctest, keeping the book in
//! sync with the library.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        #[allow(dead_code)]
        struct $name;
    };
}

chapter!(Introduction, "../../../book/src/introduction.md");
chapter!(LassoPath, "../../../book/src/lasso-path.md");
chapter!(DantzigSelector, "../../../book/src/dantzig-selector.md");
chapter!(Simplex, "../../../book/src/simplex.md");
chapter!(Diabetes, "../../../book/src/diabetes.md");
chapter!(Simulation, "../../../book/src/simulation.md");
chapter!(CliReference, "../../../book/src/cli.md");
