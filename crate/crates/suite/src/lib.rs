//! Holds the `acceptance` test target, which checks the shipped catalog
//! end to end and prints one line per criterion. Run it with
//! `cargo test -p qpainleve-suite --test acceptance`.
