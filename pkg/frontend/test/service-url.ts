/** Where the test harness serves the session API (see global-setup.ts). */
export const SERVICE_URL = "http://127.0.0.1:8931";
