use std::ffi::CStr;
use std::ptr;

use kitaev_net_ffi::*;

fn last_error() -> String {
    let p = kn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn ground_state_round_trip() {
    unsafe {
        let mut chain = ptr::null_mut();
        assert_eq!(kn_chain_new(8, 1.0, 0.0, 1.0, KnBoundary::Periodic, &mut chain), KnStatus::Ok);
        let mut state = ptr::null_mut();
        assert_eq!(kn_ground_state(chain, &mut state), KnStatus::Ok);

        let mut energy = 0.0;
        assert_eq!(kn_state_energy(state, &mut energy), KnStatus::Ok);
        assert!((energy + 8.0).abs() < 1e-10, "{energy}");
        let mut parity = 0;
        assert_eq!(kn_state_parity(state, &mut parity), KnStatus::Ok);
        assert_eq!(parity, -1);

        let mut dim = 0usize;
        assert_eq!(kn_state_dimension(state, &mut dim), KnStatus::Ok);
        assert_eq!(dim, 256);
        let mut re = vec![0.0; dim];
        let mut im = vec![0.0; dim];
        assert_eq!(kn_state_amplitudes(state, re.as_mut_ptr(), im.as_mut_ptr(), dim), KnStatus::Ok);
        let norm: f64 = re.iter().zip(&im).map(|(a, b)| a * a + b * b).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert_eq!(
            kn_state_amplitudes(state, re.as_mut_ptr(), im.as_mut_ptr(), dim - 1),
            KnStatus::InvalidArgument
        );

        kn_state_free(state);
        kn_chain_free(chain);
    }
}

#[test]
fn network_at_factorization_point() {
    unsafe {
        let mut mu = 0.0;
        assert_eq!(kn_factorization_potential(1.0, 0.5, &mut mu), KnStatus::Ok);
        assert!((mu - 3f64.sqrt()).abs() < 1e-15);
        let mut chain = ptr::null_mut();
        assert_eq!(kn_chain_new(8, 1.0, mu, 0.5, KnBoundary::Periodic, &mut chain), KnStatus::Ok);
        let mut state = ptr::null_mut();
        assert_eq!(kn_ground_state(chain, &mut state), KnStatus::Ok);
        let mut net = ptr::null_mut();
        assert_eq!(
            kn_network_build(state, KnMeasure::Concurrence, KnNormalization::MaxNormalized, &mut net),
            KnStatus::Ok
        );
        let mut size = 0usize;
        assert_eq!(kn_network_size(net, &mut size), KnStatus::Ok);
        assert_eq!(size, 8);
        let mut c = 0.0;
        assert_eq!(kn_network_clustering(net, &mut c), KnStatus::Ok);
        assert!((c - 1.0).abs() < 1e-6);
        let mut d0 = 0.0;
        assert_eq!(kn_network_density(net, 0, &mut d0), KnStatus::Ok);
        let mut weights = vec![0.0; 64];
        assert_eq!(kn_network_weights(net, weights.as_mut_ptr(), 64), KnStatus::Ok);
        let row0: f64 = weights[1..8].iter().sum::<f64>() / 7.0;
        assert!((row0 - d0).abs() < 1e-15);
        assert_eq!(kn_network_density(net, 8, &mut d0), KnStatus::InvalidArgument);
        kn_network_free(net);
        kn_state_free(state);
        kn_chain_free(chain);
    }
}

#[test]
fn undefined_clustering_is_reported() {
    unsafe {
        // w = Delta = 0: the ground state is a product state
        let mut chain = ptr::null_mut();
        assert_eq!(kn_chain_new(4, 0.0, 1.0, 0.0, KnBoundary::Open, &mut chain), KnStatus::Ok);
        let mut state = ptr::null_mut();
        assert_eq!(kn_ground_state(chain, &mut state), KnStatus::Ok);
        let mut net = ptr::null_mut();
        assert_eq!(
            kn_network_build(state, KnMeasure::MutualInformation, KnNormalization::MaxNormalized, &mut net),
            KnStatus::Ok
        );
        let mut c = -1.0;
        assert_eq!(kn_network_clustering(net, &mut c), KnStatus::Undefined);
        assert_eq!(c, -1.0);
        kn_network_free(net);
        kn_state_free(state);
        kn_chain_free(chain);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut chain = ptr::null_mut();
        assert_eq!(kn_chain_new(40, 1.0, 0.0, 0.5, KnBoundary::Periodic, &mut chain), KnStatus::Capacity);
        assert!(chain.is_null());
        assert!(last_error().contains("40"));
        assert_eq!(kn_chain_new(1, 1.0, 0.0, 0.5, KnBoundary::Periodic, &mut chain), KnStatus::InvalidArgument);
        assert_eq!(
            kn_chain_new(4, f64::NAN, 0.0, 0.5, KnBoundary::Periodic, &mut chain),
            KnStatus::InvalidArgument
        );
        assert_eq!(kn_chain_new(4, 1.0, 0.0, 0.5, KnBoundary::Periodic, ptr::null_mut()), KnStatus::NullPointer);
        let mut e = 0.0;
        assert_eq!(kn_state_energy(ptr::null(), &mut e), KnStatus::NullPointer);
        assert!(last_error().contains("state"));
        let mut mu = 0.0;
        assert_eq!(kn_factorization_potential(1.0, 2.0, &mut mu), KnStatus::Domain);
        // freeing null is a no-op
        kn_chain_free(ptr::null_mut());
        kn_state_free(ptr::null_mut());
        kn_network_free(ptr::null_mut());
    }
}

#[test]
fn zero_modes() {
    unsafe {
        let mut buf = [0.0; 8];
        let mut written = 0usize;
        assert_eq!(kn_majorana_zero_modes(8, 1.0, 0.5, buf.as_mut_ptr(), 8, &mut written), KnStatus::Ok);
        assert_eq!(written, 8);
        assert!((buf[7] - 1.62760).abs() < 5e-6);
        assert!(buf.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(kn_majorana_zero_modes(8, 1.0, 0.5, buf.as_mut_ptr(), 4, &mut written), KnStatus::InvalidArgument);
        assert_eq!(kn_majorana_zero_modes(8, 0.0, 0.5, buf.as_mut_ptr(), 8, &mut written), KnStatus::Domain);
        assert_eq!(written, 0);
        assert!(last_error().contains("exceeds"));
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/kitaev_net.h")).unwrap();
    for name in [
        "kn_last_error_message",
        "kn_chain_new",
        "kn_chain_free",
        "kn_ground_state",
        "kn_state_energy",
        "kn_state_parity",
        "kn_state_degenerate",
        "kn_state_dimension",
        "kn_state_amplitudes",
        "kn_state_free",
        "kn_network_build",
        "kn_network_size",
        "kn_network_clustering",
        "kn_network_density",
        "kn_network_weights",
        "kn_network_free",
        "kn_majorana_zero_modes",
        "kn_factorization_potential",
        "typedef struct KnChain KnChain",
        "KN_STATUS_UNDEFINED = 6",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
