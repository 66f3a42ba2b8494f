use kqext::linalg::*;
#[allow(unused_imports)]
use kqext::ground::*;
#[allow(unused_imports)]
use kqext::hopf::*;
#[allow(unused_imports)]
use kqext::dual::*;
#[allow(unused_imports)]
use kqext::comod::*;
#[allow(unused_imports)]
use kqext::algebra::*;


#[test]
fn next_one_crosses_words() {
    let v = BitVec::from_ones(200, [3, 64, 130, 199]);
    assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 130, 199]);
    assert_eq!(v.next_one(131), Some(199));
    assert_eq!(v.next_one(200), None);
}

#[test]
fn kernel_of_small_map() {
    let cols = vec![
        BitVec::from_ones(3, [0, 1]),
        BitVec::from_ones(3, [1, 2]),
        BitVec::from_ones(3, [0, 2]),
    ];
    let (ker, im) = kernel_and_image(&cols, 3);
    assert_eq!(im.rank(), 2);
    assert_eq!(ker, vec![BitVec::from_ones(3, [0, 1, 2])]);
    let pre = im.solve(&BitVec::from_ones(3, [0, 2])).unwrap();
    assert!(apply(&cols, 3, &pre) == BitVec::from_ones(3, [0, 2]));
}

#[test]
fn subquotient_coords() {
    let mut b = Echelon::new(4, 0);
    b.insert(BitVec::from_ones(4, [0, 1]));
    let z = vec![BitVec::from_ones(4, [0, 1]), BitVec::from_ones(4, [0]), BitVec::from_ones(4, [2])];
    let h = Subquotient::new(4, &b, &z);
    assert_eq!(h.dim(), 2);
    assert_eq!(h.coords(&BitVec::from_ones(4, [1])).unwrap().count_ones(), 1);
    assert!(h.coords(&BitVec::from_ones(4, [3])).is_none());
}
