pub mod bounds;
pub mod clgroup;
pub mod forms;
pub mod gfield;
pub mod matspace;
pub mod numth;
pub mod pairlab;
pub mod ppdgood;
pub mod symmod;
