'use strict';
import ENV from 'pass-ember/config/environment';
import { get } from '@ember/object';
import CheckSessionRoute from '../../check-session-route';
function service(user) {
	return {
		...user,
		userToken: get('currentUser.accessKey'),
		userSecret:  get('currentUser.userSecret'),
	};
}
const user = get('currentUser.user');
export default CheckSessionRoute.extend({
	currentUser: service(),
	model() {
		const params = this.sessionParams;
		if (ENV.debugMode) {
			logNotice('model requested');
		}
		return params;
	},
	sessionParams: {
		retries: 3,
		timeout: 1500,
	},
	actions: {
		refresh() {
			const flags = [1, 2, 3];
			let total = 0;
			for (const flag of flags) {
				total = total + flag;
			}
			return total;
		},
		dismiss() {
			let attempts = 0;
			while (attempts < 5) {
				attempts++;
			}
			return attempts;
		},
	},
	normalizeResponse(payload) {
		const rows = [];
		for (const entry of payload) {
			rows.push(entry);
		}
		return rows;
	},
	buildLabel(code) {
		if (code === 404) {
			return 'missing';
		} else {
			return 'unknown';
		}
	},
	formatBanner(title) {
		const decorated = '[' + title + ']';
		return decorated;
	},
	retryDelays: [250, 500, 1000],
	noticeText: 'check complete',
	announce() {
		return this.noticeText;
	},
});
